use active_flux::driver::{converge_ns_manufactured, Problem, RunConfig, run};

fn main() {
    let mut cfg = RunConfig::preset(Problem::NsManufactured);
    cfg.n_cells = 10;
    cfg.t_end = 0.1;
    cfg.out_dir = None;
    let report = run(&cfg).unwrap();
    println!("N=10 short run: steps {}, residual {:.2e}", report.steps, report.max_dual_residual);
    let _ = converge_ns_manufactured;
}
