//! Acceptance checks: one line per criterion with its measured values and runtime.
//! Runs without the libtest harness so the lines always reach the console.

use std::time::{Duration, Instant};

use extcalc::cohomology::{betti_numbers, is_closed, is_exact, winding_cochain};
use extcalc::complex::Chain;
use extcalc::demos::{
    ampere_wire, betti_cases, charge_conservation_run, ff_wedge, gauss_point_charge, identity_suite, run_demo,
    stokes_disk, twist_round_trips, IDENTITY_NAMES, RIM_VALUES,
};
use extcalc::forms_dec::{integrate, integrate_top, measure_from_metric, stokes_pairing_check, DecError};
use extcalc::grid::RectGrid;
use extcalc::linalg::Matrix;
use extcalc::maxwell::{evolve_leapfrog, lorentz_force, plane_wave_state, EmState, Materials, Particle};
use extcalc::meshes;
use extcalc::metric::Metric;
use extcalc::scalar::{rat, ratio};
use extcalc::{Cochain, Parity, PolyForm, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, text: String) -> Check {
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn stokes_figure() -> Check {
    let (c, w, disk) = stokes_disk();
    let (lhs, rhs) = stokes_pairing_check(&w, &disk, &c).map_err(|e| e.to_string())?;
    // The rim values alone fix the boundary integral.
    let oracle: i64 = RIM_VALUES.iter().sum();
    let demo = run_demo("stokes-disk-minus7").ok_or("demo missing")?;
    ensure(
        oracle == -7 && lhs == rat(-7) && rhs == rat(-7) && demo.passed,
        format!("<dw, disk> = {lhs}, <w, boundary> = {rhs}, rim sum {oracle}"),
    )
}

fn identities() -> Check {
    let tallies = identity_suite(1000, 20_240_601);
    let total: usize = tallies.iter().map(|t| t.checks).sum();
    let failures: usize = tallies.iter().map(|t| t.failures).sum();
    let names_match = tallies.iter().map(|t| t.name).eq(IDENTITY_NAMES.iter().copied());
    let each = tallies.iter().all(|t| t.checks == 1000);
    let first = tallies.iter().find_map(|t| t.first_failure.clone().map(|f| format!("; {}: {f}", t.name))).unwrap_or_default();
    ensure(names_match && each && failures == 0, format!("{} identities x 1000, {total} checks, {failures} failures{first}", tallies.len()))
}

/// Winding number of a closed polygon about the origin from summed turning angles.
fn winding_number(points: &[[f64; 2]]) -> i64 {
    let mut total = 0.0;
    for i in 0..points.len() {
        let (a, b) = (points[i], points[(i + 1) % points.len()]);
        total += (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    (total / std::f64::consts::TAU).round() as i64
}

fn cohomology() -> Check {
    let mut notes = Vec::new();
    for (name, c, expected, orientable) in betti_cases() {
        let r = betti_numbers(&c).map_err(|e| e.to_string())?;
        if r.betti != expected || r.orientable != orientable {
            return Err(format!("{name}: betti {:?} orientable {}", r.betti, r.orientable));
        }
        notes.push(format!("{name} {:?}{}", r.betti, if orientable { "" } else { " non-orientable" }));
    }
    let a = meshes::annulus();
    let w = winding_cochain(&a, [0.0, 0.0]);
    let loop_integral = |vs: &[usize]| -> Result<(Rational, i64), String> {
        let terms: Vec<(Vec<usize>, Rational)> = (0..vs.len()).map(|i| (vec![vs[i], vs[(i + 1) % vs.len()]], rat(1))).collect();
        let ch = Chain::from_tuples(&a, &terms, Parity::Straight).map_err(|e| e.to_string())?;
        let pts: Vec<[f64; 2]> = vs.iter().map(|&v| [a.vertices()[v][0], a.vertices()[v][1]]).collect();
        Ok((integrate(&w, &ch, &a).map_err(|e| e.to_string())?, winding_number(&pts)))
    };
    let (around, around_oracle) = loop_integral(&[0, 1, 2, 3])?;
    let (small, small_oracle) = loop_integral(&[0, 4, 5])?;
    let closed = is_closed(&w, &a).map_err(|e| e.to_string())?;
    let exact = is_exact(&w, &a).map_err(|e| e.to_string())?.exact;
    ensure(
        closed && !exact && around != rat(0) && around == rat(around_oracle) && small == rat(small_oracle) && small_oracle == 0,
        format!("{}; winding closed {closed}, exact {exact}, hole loop {around}, contractible loop {small}", notes.join(", ")),
    )
}

fn twisted_semantics() -> Check {
    let k = 7;
    let m = meshes::mobius_strip(k);
    // k unit squares.
    let area_oracle = k as f64;
    let area = measure_from_metric(&m, &Metric::euclidean(2)).map_err(|e| e.to_string())?.total();
    let straight = Cochain::new(&m, 2, vec![rat(1); m.count(2)], Parity::Straight).map_err(|e| e.to_string())?;
    let refused = integrate_top(&straight, &m) == Err(DecError::OnlyTwistedTopForms);
    let failures = twist_round_trips(1000, 99);
    ensure(
        (area - area_oracle).abs() < 1e-12 && refused && failures == 0,
        format!("twisted area {area} (expected {area_oracle}), straight refused {refused}, 1000 twist round trips with {failures} failures"),
    )
}

fn ff_4d() -> Check {
    let ff = ff_wedge();
    // (F∧F)_{0123} = 2 (F01 F23 - F02 F13 + F03 F12) for F01 = F23 = 1.
    let (f01, f02, f03, f12, f13, f23) = (rat(1), rat(0), rat(0), rat(0), rat(0), rat(1));
    let oracle = rat(2) * (f01 * f23 - f02 * f13 + f03 * f12);
    let expected = PolyForm::basis(4, &[0, 1, 2, 3], Parity::Straight).map_err(|e| e.to_string())?.scale_const(&oracle);
    let coeff = ff.coefficient(&[0, 1, 2, 3]);
    ensure(ff == expected && oracle == rat(2), format!("F^F = ({coeff}) dt^dx^dy^dz"))
}

fn electrostatics() -> Check {
    let q = 1.0;
    let fluxes = gauss_point_charge(32, q, &[4, 8, 12]).map_err(|e| e.to_string())?;
    let worst = fluxes.iter().map(|(_, f)| (f - q).abs() / q).fold(0.0, f64::max);
    let text: Vec<String> = fluxes.iter().map(|(r, f)| format!("r={r}: {f:.10}")).collect();
    ensure(fluxes.len() == 3 && worst <= 0.01, format!("32^3 grounded box, Q = {q}; {}; worst relative error {worst:.2e}", text.join(", ")))
}

fn magnetostatics() -> Check {
    let i = 2.0;
    let (linking, enclosed, other) = ampere_wire(32, i).map_err(|e| e.to_string())?;
    ensure(
        (linking - i).abs() <= 0.01 * i && other.abs() <= 0.01 * i && enclosed == i,
        format!("I = {i}: linking circulation {linking:.10}, non-linking {other:.2e}"),
    )
}

/// Exact integrated `E_y` of `sin 2π(x - t)` on the y-edges of a periodic `(n, 1, 1)` grid.
fn exact_plane_wave(grid: &RectGrid, t: f64) -> Vec<f64> {
    let h = grid.spacing()[0];
    (0..grid.count(1))
        .map(|e| {
            let c = grid.cell(1, e);
            if c.dirs == [1] {
                h * (std::f64::consts::TAU * (c.base[0] as f64 * h - t)).sin()
            } else {
                0.0
            }
        })
        .collect()
}

fn evolution() -> Check {
    let mut errors = Vec::new();
    let mut max_db: f64 = 0.0;
    for n in [64usize, 128, 256] {
        let steps = 2 * n;
        let dt = 1.0 / steps as f64;
        let mut st = plane_wave_state(n, dt).map_err(|e| e.to_string())?;
        let diag = evolve_leapfrog(&mut st, steps, dt).map_err(|e| e.to_string())?;
        max_db = max_db.max(diag.max_div_b());
        let exact = exact_plane_wave(&st.grid, st.time);
        let num: f64 = st.e.iter().zip(&exact).map(|(a, b)| (a - b).powi(2)).sum();
        let den: f64 = exact.iter().map(|b| b * b).sum();
        errors.push((num / den).sqrt());
    }
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    // A 3-d run with a moving charge exercises every face of dB.
    let grid = RectGrid::periodic(vec![6, 6, 6], vec![0.2; 3]).map_err(|e| e.to_string())?;
    let mut st = EmState::new(grid.clone(), Materials::uniform(&grid, 1.0, 1.0)).map_err(|e| e.to_string())?;
    st.particles.push(Particle::uniform(1.0, [0.31, 0.52, 0.13], [0.4, -0.3, 0.2]));
    st.particles.push(Particle::uniform(-1.0, [0.7, 0.5, 0.5], [0.0, 0.1, 0.0]));
    let dt = 0.5 * st.cfl_limit();
    let diag3 = evolve_leapfrog(&mut st, 500, dt).map_err(|e| e.to_string())?;
    max_db = max_db.max(diag3.max_div_b());
    let run = charge_conservation_run(64, 10_000).map_err(|e| e.to_string())?;
    let conserved = run.report.closed && run.max_gauss_drift <= 1e-12 && run.charge_drift <= 1e-12;
    ensure(
        orders.iter().all(|&o| o >= 1.8) && max_db <= 1e-12 && conserved && diag3.max_gauss_drift() <= 1e-12,
        format!(
            "L2 errors {:.3e}/{:.3e}/{:.3e}, orders {:.3}/{:.3}; max |dB| {max_db:.1e}; 10^4 steps: leak {:.1e}, Gauss drift {:.1e}",
            errors[0], errors[1], errors[2], orders[0], orders[1], run.report.leak, run.max_gauss_drift
        ),
    )
}

fn metric_suite() -> Check {
    let beta: f64 = 0.6;
    let oracle = 1.0 / (1.0 - beta * beta).sqrt();
    let g = Metric::<f64>::minkowski(4);
    let gamma = g.gamma_factor(&[1.0, 0.0, 0.0, 0.0], &[oracle, oracle * beta, 0.0, 0.0]).map_err(|e| e.to_string())?.value;
    let gr = Metric::<Rational>::minkowski(4);
    let exact = gr.gamma_factor(&[rat(1), rat(0), rat(0), rat(0)], &[ratio(5, 4), ratio(3, 4), rat(0), rat(0)]).map_err(|e| e.to_string())?;
    let v = [rat(5), rat(3), rat(0), rat(4)];
    let self_inner = gr.inner(&v, &v).map_err(|e| e.to_string())?;
    let dual = gr.flat(&v).map_err(|e| e.to_string())?;
    let dual_on_v = dual.iter().zip(&v).fold(rat(0), |acc, (a, b)| acc + a * b);
    let m = PolyForm::basis(3, &[0], Parity::Straight)
        .map_err(|e| e.to_string())?
        .scale_const(&ratio(7, 2))
        .magnitude_at(&[rat(0), rat(0), rat(0)], &Metric::euclidean(3))
        .map_err(|e| e.to_string())?;
    ensure(
        (gamma - 1.25).abs() <= 1e-12
            && (oracle - 1.25).abs() <= 1e-12
            && exact.value == ratio(5, 4)
            && self_inner == rat(0)
            && dual_on_v == rat(0)
            && m.exact == Some(ratio(7, 2)),
        format!(
            "gamma(0.6) = {gamma} (exact {}), lightlike g(V,V) = {self_inner}, V-flat(V) = {dual_on_v}, |3.5 dx| = {}",
            exact.value,
            m.exact.map_or_else(|| "irrational".into(), |x| x.to_string())
        ),
    )
}

fn lorentz() -> Check {
    let g = Metric::<f64>::minkowski(4);
    let eta = [-1.0, 1.0, 1.0, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut worst_orth: f64 = 0.0;
    let mut worst_formula: f64 = 0.0;
    for _ in 0..1000 {
        let u: [f64; 3] = [rng.gen_range(-0.55..0.55), rng.gen_range(-0.55..0.55), rng.gen_range(-0.55..0.55)];
        let gamma = 1.0 / (1.0 - u.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let v = [gamma, gamma * u[0], gamma * u[1], gamma * u[2]];
        let mut f = Matrix::zeros(4, 4);
        for a in 0..4 {
            for b in a + 1..4 {
                let x: f64 = rng.gen_range(-3.0..3.0);
                f[(a, b)] = x;
                f[(b, a)] = -x;
            }
        }
        let q: f64 = rng.gen_range(-2.0..2.0);
        let out = lorentz_force(&q, &v, &f, &g).map_err(|e| e.to_string())?;
        // Oracle: f_mu = q F_{mu nu} V^nu, raised with the diagonal Minkowski metric.
        for mu in 0..4 {
            let lower: f64 = q * (0..4).map(|nu| f[(mu, nu)] * v[nu]).sum::<f64>();
            worst_formula = worst_formula.max((out.vector[mu] - eta[mu] * lower).abs());
        }
        let orth: f64 = (0..4).map(|mu| eta[mu] * out.vector[mu] * v[mu]).sum();
        worst_orth = worst_orth.max(orth.abs());
    }
    // Rest charge in F = E_i dx^i ∧ dt: spatial force q E.
    let (q, e) = (ratio(3, 2), [rat(2), rat(-5), ratio(1, 3)]);
    let mut f = Matrix::zeros(4, 4);
    for i in 0..3 {
        f[(i + 1, 0)] = e[i].clone();
        f[(0, i + 1)] = -e[i].clone();
    }
    let rest = lorentz_force(&q, &[rat(1), rat(0), rat(0), rat(0)], &f, &Metric::minkowski(4)).map_err(|e| e.to_string())?;
    let expected: Vec<Rational> = std::iter::once(rat(0)).chain(e.iter().map(|x| &q * x)).collect();
    ensure(
        worst_orth <= 1e-12 && worst_formula <= 1e-12 && rest.vector == expected,
        format!("max |g(f,V)| {worst_orth:.1e} over 1000 samples (formula residual {worst_formula:.1e}); rest charge force = qE exactly"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<u64>); 10] = [
        ("Stokes figure on the disk", stokes_figure, Some(1)),
        ("identity suite", identities, Some(30)),
        ("cohomology", cohomology, Some(5)),
        ("twisted-form semantics", twisted_semantics, None),
        ("F^F in 4 dimensions", ff_4d, None),
        ("electrostatics", electrostatics, Some(60)),
        ("magnetostatics", magnetostatics, Some(60)),
        ("evolution", evolution, Some(120)),
        ("metric suite", metric_suite, None),
        ("Lorentz force", lorentz, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = budget.map_or(true, |b| elapsed <= Duration::from_secs(b));
        let (ok, detail) = match result {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2}s{}{}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.map_or_else(String::new, |b| format!(", limit {b}s")),
            if in_time { "" } else { ", over time" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
