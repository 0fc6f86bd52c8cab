use mvss::instances::*;
use mvss_core::complex::nerve;
use mvss_core::cover::validate_cover;
use mvss_core::parallel::Serial;
use mvss_core::persistence::standard_persistence;
use mvss_core::spectral::*;
use mvss_core::FieldSpec;
fn main() {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    let inst = hotspot_sphere(args[0] as usize, args[1], 5, args[2]);
    let x = &inst.complex;
    println!("simplices {} {} {}", x.count(0), x.count(1), x.count(2));
    println!("valid {}", validate_cover(x, &inst.cover).passed());
    let n = nerve(x, &inst.cover);
    println!("nerve {:?}", n.counts());
    let f = FieldSpec::gf2();
    println!("oracle\n{}", standard_persistence(x, &f));
    let t = std::time::Instant::now();
    let dc = DoubleComplex::assemble(x, &inst.cover, &f).unwrap();
    let run = run_to_collapse(&dc, &Serial, true).unwrap();
    for (pg, d) in run.pages.iter().zip(run.differentials.iter().map(Some).chain([None])) {
        print!("{}", dump_page(&dc, pg, d).unwrap().lines().filter(|l| !l.contains(": 0") && l.len() < 300).map(|l| format!("{l}\n")).collect::<String>());
    }
    println!("read_off\n{}", read_off(run.last()).unwrap());
    println!("exact\n{}", global_reconcile(&dc, run.last(), &Serial).unwrap());
    println!("{:?}", t.elapsed());
}
