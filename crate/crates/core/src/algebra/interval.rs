use super::chain::GradedChain;
use super::module::{Death, Interval};
use crate::error::{Error, Result};
use crate::field::{Coeff, FieldSpec};
use crate::Grade;

/// Outcome of reducing an annotated chain `x : [c,d]` by a basis chain
/// `y : [a,b]` sharing its pivot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalStep {
    /// `x - t^(c-a) k y`.
    pub x: GradedChain,
    /// Field part `k` of the multiplier.
    pub coefficient: Coeff,
    /// Power of `t` in the multiplier, `c - a`.
    pub shift: Grade,
    /// New annotation of `x`: `[b, d]`. This is the kernel part.
    pub x_interval: (Death, Death),
    /// New annotation of `y`: `[a, c]`. This is the cokernel part.
    pub y_interval: (Grade, Grade),
    /// `x` became null persistent (`b == d`) and needs no further reduction.
    pub x_null: bool,
    /// `y` became null persistent (`a == c`).
    pub y_null: bool,
}

/// One annotated reduction step. Requires `a <= c <= b <= d`, which holds for
/// any degree-0 map between interval modules.
pub fn interval_reduce_step(x: &GradedChain, x_iv: Interval, y: &GradedChain, y_iv: Interval, field: &FieldSpec) -> Result<IntervalStep> {
    let (a, b) = (y_iv.birth, y_iv.death);
    let (c, d) = (x_iv.birth, x_iv.death);
    let as_u64 = |v: Death| v.finite().map_or(u64::MAX, u64::from);
    if a > c || Death::Finite(c) > b || b > d {
        return Err(Error::GradingViolation {
            a,
            b: as_u64(b),
            c,
            d: as_u64(d),
        });
    }
    let (xr, xc) = x
        .lowest()
        .ok_or_else(|| Error::invariant("algebra", "interval reduction of a zero chain"))?;
    let (yr, yc) = y
        .lowest()
        .ok_or_else(|| Error::invariant("algebra", "interval reduction by a zero chain"))?;
    if xr != yr {
        return Err(Error::invariant("algebra", "interval reduction without a shared pivot"));
    }
    let k = field.mul(xc, field.inv(yc));
    let mut out = x.clone();
    out.add_scaled(y, field.neg(k), field);
    Ok(IntervalStep {
        x: out,
        coefficient: k,
        shift: c - a,
        x_interval: (b, d),
        y_interval: (a, c),
        x_null: b == d,
        y_null: a == c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(b: Grade, d: Option<Grade>) -> Interval {
        Interval {
            birth: b,
            death: d.map_or(Death::Infinite, Death::Finite),
        }
    }

    #[test]
    fn overlapping_intervals() {
        let f = FieldSpec::gf2();
        let x = GradedChain::unit(2, 0);
        let y = GradedChain::unit(1, 0);
        let s = interval_reduce_step(&x, iv(2, Some(5)), &y, iv(1, Some(4)), &f).unwrap();
        assert_eq!(s.x_interval, (Death::Finite(4), Death::Finite(5)));
        assert_eq!(s.y_interval, (1, 2));
        assert_eq!(s.shift, 1);
        assert_eq!(s.coefficient, 1);
        assert!(s.x.is_zero());
        assert!(!s.x_null && !s.y_null);
    }

    #[test]
    fn equal_intervals_become_null() {
        let f = FieldSpec::new(3).unwrap();
        let x = GradedChain::from_entries(3, alloc::vec![(0, 2)], &f);
        let y = GradedChain::unit(3, 0);
        let s = interval_reduce_step(&x, iv(3, Some(7)), &y, iv(3, Some(7)), &f).unwrap();
        assert!(s.x_null);
        assert_eq!(s.coefficient, 2);
    }

    #[test]
    fn infinite_bars_eliminate() {
        let f = FieldSpec::gf2();
        let x = GradedChain::unit(0, 0);
        let s = interval_reduce_step(&x, iv(0, None), &x, iv(0, None), &f).unwrap();
        assert_eq!(s.x_interval, (Death::Infinite, Death::Infinite));
        assert!(s.x_null);
    }

    #[test]
    fn grading_violation() {
        let f = FieldSpec::gf2();
        let x = GradedChain::unit(0, 0);
        let y = GradedChain::unit(1, 0);
        assert!(matches!(
            interval_reduce_step(&x, iv(0, Some(3)), &y, iv(1, Some(2)), &f),
            Err(Error::GradingViolation { .. })
        ));
    }
}
