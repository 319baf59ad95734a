//! `extcalc`: command-line front end.
//!
//! Exit codes: 0 success, 1 check failure or solver error, 2 usage error, 3 input parse error.
//! CSV results go to stdout, or to files in `$EXTCALC_OUT_DIR` when it is set.

mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use extcalc::cohomology::betti_numbers;
use extcalc::demos::{run_demo, DEMO_IDS};
use extcalc::forms_dec::{hodge_diagonal, integrate, integrate_top, stokes_pairing_check};
use extcalc::forms_poly::PolyForm;
use extcalc::io::{parse_chain, parse_cochain, parse_mesh, write_cochain_f64, Scenario};
use extcalc::maxwell::{
    box_flux, box_sum, deposit_charge, enclosed_current, evolve_leapfrog, loop_circulation, lorentz_force, plane_wave_state,
    solve_electrostatics, solve_magnetostatics, two_form_matrix, wire_current, EmState,
};
use extcalc::metric::{parse_metric, Metric};
use extcalc::scalar::{format_rational, parse_rational};
use extcalc::SimplicialComplex;

pub const OUT_DIR_VAR: &str = "EXTCALC_OUT_DIR";

#[derive(Parser)]
#[command(name = "extcalc", version, about = "Exterior calculus on meshes, grids and coordinate space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simplex counts, Euler characteristic and orientability of a mesh.
    MeshInfo { mesh: PathBuf },
    /// Betti numbers and torsion of a mesh.
    Cohomology { mesh: PathBuf },
    /// Integrate a cochain over a chain file, or a top cochain over the whole mesh.
    Integrate {
        mesh: PathBuf,
        cochain: PathBuf,
        #[arg(long)]
        chain: Option<PathBuf>,
    },
    /// Both sides of Stokes's theorem for a cochain and a chain one degree higher.
    StokesCheck { mesh: PathBuf, cochain: PathBuf, chain: PathBuf },
    /// Diagonal Hodge star of a cochain (circumcentric duals).
    Hodge {
        mesh: PathBuf,
        cochain: PathBuf,
        /// Metric literal, e.g. `diag(1,1)`; Euclidean by default.
        #[arg(long)]
        metric: Option<String>,
    },
    /// Electrostatics on a rectilinear grid from a scenario file.
    MaxwellStaticE { scenario: PathBuf },
    /// Magnetostatics on a rectilinear grid from a scenario file.
    MaxwellStaticB { scenario: PathBuf },
    /// Leapfrog time evolution from a scenario file.
    MaxwellEvolve { scenario: PathBuf },
    /// Lorentz force 1-form and vector for a constant 2-form.
    Lorentz {
        /// 2-form text, e.g. `n=4 p=2 parity=straight; [1,0]: 3`.
        #[arg(long)]
        field: String,
        /// Comma-separated components of the unit timelike 4-velocity.
        #[arg(long)]
        velocity: String,
        #[arg(long, default_value = "1")]
        charge: String,
        #[arg(long, default_value = "diag(-1,1,1,1)")]
        metric: String,
    },
    /// Run a named check (`--list` shows the ids, `all` runs every one).
    Demo {
        #[arg(required_unless_present = "list")]
        id: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

enum Failure {
    Check(String),
    Usage(String),
    Parse(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Parse(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Usage(m) | Failure::Parse(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Parse(format!("{}: {e}", path.display()))
}

fn load_mesh(path: &Path) -> Result<SimplicialComplex, Failure> {
    parse_mesh(&read(path)?).map_err(|e| parse_err(path, e))
}

fn load_scenario(path: &Path, keys: &[&str]) -> Result<Scenario, Failure> {
    let s = Scenario::parse(&read(path)?).map_err(|e| parse_err(path, e))?;
    scenario::check_keys(&s, keys).map_err(|e| parse_err(path, e))?;
    Ok(s)
}

fn check_fail(e: impl std::fmt::Display) -> Failure {
    Failure::Check(e.to_string())
}

/// Write `content` to `$EXTCALC_OUT_DIR/name` if set, else to stdout.
fn emit(name: &str, content: &str) -> Outcome {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) => {
            let dir = PathBuf::from(dir);
            std::fs::create_dir_all(&dir).map_err(|e| Failure::Check(format!("{}: {e}", dir.display())))?;
            let path = dir.join(name);
            std::fs::write(&path, content).map_err(|e| Failure::Check(format!("{}: {e}", path.display())))?;
            println!("wrote {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn mesh_info(path: &Path) -> Outcome {
    let c = load_mesh(path)?;
    println!("dimension {}", c.dim());
    println!("embedding {}", c.embedding_dim());
    for k in 0..=c.dim() {
        println!("simplices[{k}] {}", c.count(k));
    }
    println!("euler {}", c.euler_characteristic());
    println!("charts {}", c.has_charts());
    match c.check_pseudo_manifold() {
        Ok(()) => println!("pseudo-manifold true"),
        Err(e) => println!("pseudo-manifold false ({e})"),
    }
    match c.orientability() {
        Ok(o) => println!("orientable {}", o.orientable),
        Err(e) => println!("orientable unknown ({e})"),
    }
    Ok(())
}

fn cohomology(path: &Path) -> Outcome {
    let c = load_mesh(path)?;
    let report = betti_numbers(&c).map_err(check_fail)?;
    print!("{}", report.table());
    println!("euler {}", report.euler_characteristic());
    Ok(())
}

fn integrate_cmd(mesh: &Path, cochain: &Path, chain: Option<&Path>) -> Outcome {
    let c = load_mesh(mesh)?;
    let w = parse_cochain(&read(cochain)?, &c).map_err(|e| parse_err(cochain, e))?;
    let value = match chain {
        Some(p) => {
            let ch = parse_chain(&read(p)?, &c).map_err(|e| parse_err(p, e))?;
            integrate(&w, &ch, &c)
        }
        None => integrate_top(&w, &c),
    }
    .map_err(check_fail)?;
    println!("integral {}", format_rational(&value));
    Ok(())
}

fn stokes_cmd(mesh: &Path, cochain: &Path, chain: &Path) -> Outcome {
    let c = load_mesh(mesh)?;
    let w = parse_cochain(&read(cochain)?, &c).map_err(|e| parse_err(cochain, e))?;
    let ch = parse_chain(&read(chain)?, &c).map_err(|e| parse_err(chain, e))?;
    let (lhs, rhs) = stokes_pairing_check(&w, &ch, &c).map_err(check_fail)?;
    println!("<dw, c> {}", format_rational(&lhs));
    println!("<w, bc> {}", format_rational(&rhs));
    if lhs == rhs {
        println!("PASS");
        Ok(())
    } else {
        Err(Failure::Check("FAIL: the two sides differ".into()))
    }
}

fn hodge_cmd(mesh: &Path, cochain: &Path, metric: Option<&str>) -> Outcome {
    let c = load_mesh(mesh)?;
    let w = parse_cochain(&read(cochain)?, &c).map_err(|e| parse_err(cochain, e))?;
    let g = match metric {
        Some(m) => parse_metric(m).map_err(|e| Failure::Parse(format!("--metric: {e}")))?.to_f64(),
        None => {
            let dim = if c.has_charts() { c.top_coords(0)[0].len() } else { c.embedding_dim() };
            Metric::euclidean(dim)
        }
    };
    let star = hodge_diagonal(&w.to_f64(), &c, &g).map_err(check_fail)?;
    emit("hodge.csv", &write_cochain_f64(&star))
}

fn static_e(path: &Path) -> Outcome {
    let s = load_scenario(path, scenario::STATIC_E_KEYS)?;
    let pe = |e| parse_err(path, e);
    let grid = scenario::grid(&s, false).map_err(pe)?;
    let mat = scenario::materials(&s, &grid).map_err(pe)?;
    let rho = scenario::charges(&s, &grid).map_err(pe)?;
    let boxes = scenario::boxes(&s, &grid).map_err(pe)?;
    let tol = s.scalar::<f64>("tol").map_err(pe)?.unwrap_or(1e-10);
    let max_iter = s.scalar::<usize>("max_iter").map_err(pe)?.unwrap_or(20_000);
    let sol = solve_electrostatics(&grid, &rho, &mat, tol, max_iter).map_err(check_fail)?;
    eprintln!("cg: {} iterations, relative residual {:.3e}", sol.report.iterations, sol.report.relative_residual);
    let mut csv = String::from("probe,lo,hi,flux,charge\n");
    for (i, (lo, hi)) in boxes.iter().enumerate() {
        let flux = box_flux(&grid, &sol.d, lo, hi);
        let q = box_sum(&grid, &rho, lo, hi);
        csv.push_str(&format!("{i},{},{},{flux:.12e},{q:.12e}\n", join(lo), join(hi)));
    }
    emit(&format!("{}.csv", scenario::name(&s, "static_e")), &csv)
}

fn static_b(path: &Path) -> Outcome {
    let s = load_scenario(path, scenario::STATIC_B_KEYS)?;
    let pe = |e| parse_err(path, e);
    let grid = scenario::grid(&s, false).map_err(pe)?;
    let mat = scenario::materials(&s, &grid).map_err(pe)?;
    let mut j = vec![0.0; grid.count(1)];
    for (x, y, current) in scenario::wires(&s, &grid).map_err(pe)? {
        j.iter_mut().zip(wire_current(&grid, x, y, current)).for_each(|(a, b)| *a += b);
    }
    let loops = scenario::loops(&s, &grid).map_err(pe)?;
    let tol = s.scalar::<f64>("tol").map_err(pe)?.unwrap_or(1e-10);
    let max_iter = s.scalar::<usize>("max_iter").map_err(pe)?.unwrap_or(20_000);
    let sol = solve_magnetostatics(&grid, &j, &mat, tol, max_iter).map_err(check_fail)?;
    eprintln!("cg: {} iterations, relative residual {:.3e}", sol.report.iterations, sol.report.relative_residual);
    let mut csv = String::from("probe,k,lo,hi,circulation,current\n");
    for (i, (k, lo, hi)) in loops.iter().enumerate() {
        let c = loop_circulation(&grid, &sol.h, *k, *lo, *hi);
        let enc = enclosed_current(&grid, &j, *k, *lo, *hi);
        csv.push_str(&format!("{i},{k},{} {},{} {},{c:.12e},{enc:.12e}\n", lo.0, lo.1, hi.0, hi.1));
    }
    emit(&format!("{}.csv", scenario::name(&s, "static_b")), &csv)
}

fn evolve(path: &Path) -> Outcome {
    let s = load_scenario(path, scenario::EVOLVE_KEYS)?;
    let pe = |e| parse_err(path, e);
    let grid = scenario::grid(&s, true).map_err(pe)?;
    let steps = s.scalar::<usize>("steps").map_err(pe)?.unwrap_or(100);
    let plane_wave = s.scalar::<bool>("plane_wave").map_err(pe)?.unwrap_or(false);
    let mut state = EmState::new(grid.clone(), scenario::materials(&s, &grid).map_err(pe)?).map_err(check_fail)?;
    let dt = match s.scalar::<f64>("dt").map_err(pe)? {
        Some(dt) => dt,
        None => s.scalar::<f64>("courant").map_err(pe)?.unwrap_or(0.5) * state.cfl_limit(),
    };
    if plane_wave {
        let shape = grid.shape();
        if shape[1] != 1 || shape[2] != 1 || !(0..3).all(|a| grid.is_periodic(a)) {
            let line = s.get("plane_wave").map_or(0, |(_, l)| l);
            return Err(parse_err(path, format!("line {line}: plane_wave needs a periodic n x 1 x 1 grid")));
        }
        state = plane_wave_state(shape[0], dt).map_err(check_fail)?;
    }
    state.particles = scenario::particles(&s).map_err(pe)?;
    if !state.particles.is_empty() {
        // Start from the electrostatic field of the initial charges so that div D = rho.
        let h = state.grid.spacing().to_vec();
        let mut rho = vec![0.0; state.grid.count(0)];
        for p in &state.particles {
            deposit_charge(&state.grid, &h, &p.charge, &(p.trajectory)(0.0), &mut rho).map_err(check_fail)?;
        }
        let sol = solve_electrostatics(&state.grid, &rho, &state.materials, 1e-12, 100_000).map_err(check_fail)?;
        state.set_e(sol.e).map_err(check_fail)?;
    }
    state.probes = scenario::probes(&s, &state.grid).map_err(pe)?;
    let diag = evolve_leapfrog(&mut state, steps, dt).map_err(check_fail)?;
    eprintln!(
        "{steps} steps of {dt:.6e}: max |dB| {:.2e}, max Gauss drift {:.2e}, energy variation {:.2e}",
        diag.max_div_b(),
        diag.max_gauss_drift(),
        diag.energy_variation()
    );
    emit(&format!("{}.csv", scenario::name(&s, "evolve")), &diag.to_csv())
}

fn lorentz_cmd(field: &str, velocity: &str, charge: &str, metric: &str) -> Outcome {
    let g = parse_metric(metric).map_err(|e| Failure::Parse(format!("--metric: {e}")))?;
    let f = PolyForm::parse(field).map_err(|e| Failure::Parse(format!("--field: {e}")))?;
    let m = two_form_matrix(&f).ok_or_else(|| Failure::Parse("--field: need a constant 2-form".into()))?;
    let v = velocity
        .split(',')
        .map(|x| parse_rational(x).ok_or_else(|| Failure::Parse(format!("--velocity: bad component {x:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let q = parse_rational(charge).ok_or_else(|| Failure::Parse(format!("--charge: bad value {charge:?}")))?;
    if v.len() != g.dim() || f.ambient_dim() != g.dim() {
        return Err(Failure::Parse(format!("dimensions disagree: metric {}, field {}, velocity {}", g.dim(), f.ambient_dim(), v.len())));
    }
    let out = lorentz_force(&q, &v, &m, &g).map_err(check_fail)?;
    let fmt = |x: &[extcalc::Rational]| x.iter().map(format_rational).collect::<Vec<_>>().join(",");
    println!("covector {}", fmt(&out.covector));
    println!("vector {}", fmt(&out.vector));
    println!("g(f,V) {}", format_rational(&g.inner(&out.vector, &v).map_err(check_fail)?));
    Ok(())
}

fn demo(id: Option<&str>, list: bool) -> Outcome {
    if list {
        DEMO_IDS.iter().for_each(|id| println!("{id}"));
        return Ok(());
    }
    let id = id.expect("clap requires an id without --list");
    let ids: Vec<&str> = if id == "all" { DEMO_IDS.to_vec() } else { vec![id] };
    let mut failed = Vec::new();
    for id in ids {
        let out = run_demo(id).ok_or_else(|| Failure::Usage(format!("unknown demo {id:?}; known: {}", DEMO_IDS.join(", "))))?;
        println!("== {id}");
        out.lines.iter().for_each(|l| println!("{l}"));
        println!("{} {id}", if out.passed { "PASS" } else { "FAIL" });
        if !out.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed: {}", failed.join(", "))))
    }
}

fn join(x: &[usize]) -> String {
    x.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::MeshInfo { mesh } => mesh_info(mesh),
        Command::Cohomology { mesh } => cohomology(mesh),
        Command::Integrate { mesh, cochain, chain } => integrate_cmd(mesh, cochain, chain.as_deref()),
        Command::StokesCheck { mesh, cochain, chain } => stokes_cmd(mesh, cochain, chain),
        Command::Hodge { mesh, cochain, metric } => hodge_cmd(mesh, cochain, metric.as_deref()),
        Command::MaxwellStaticE { scenario } => static_e(scenario),
        Command::MaxwellStaticB { scenario } => static_b(scenario),
        Command::MaxwellEvolve { scenario } => evolve(scenario),
        Command::Lorentz { field, velocity, charge, metric } => lorentz_cmd(field, velocity, charge, metric),
        Command::Demo { id, list } => demo(id.as_deref(), *list),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
