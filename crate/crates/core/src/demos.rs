//! Named, self-checking scenarios. Each returns its report lines and a pass flag.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{betti_numbers, is_closed, is_exact, winding_cochain};
use crate::complex::{boundary, Chain, Parity, SimplicialComplex};
use crate::forms_dec::{coboundary, integrate_top, measure_from_metric, stokes_pairing_check, twist_cochain, Cochain, DecError};
use crate::forms_poly::{FormError, PolyForm, PolyMap, PolyVectorField};
use crate::grid::RectGrid;
use crate::linalg::Matrix;
use crate::maxwell::{
    charge_conservation_check, enclosed_current, evolve_with, lorentz_force, loop_circulation, plane_wave_error,
    plane_wave_state, solve_electrostatics, solve_magnetostatics, wire_current, ChargeConservationReport, MaxwellError,
    Materials, Particle,
};
use crate::meshes;
use crate::metric::{CausalCharacter, Metric};
use crate::poly::Poly;
use crate::scalar::{format_rational, rat, ratio, Rational};

pub const DEMO_IDS: [&str; 11] = [
    "stokes-disk-minus7",
    "identity-suite",
    "annulus-hole",
    "torus-betti",
    "mobius-twisted-only",
    "ffwedge-4d",
    "gauss-point-charge",
    "ampere-wire",
    "plane-wave",
    "metric-suite",
    "lorentz-rest-charge",
];

#[derive(Clone, Debug, PartialEq)]
pub struct DemoOutcome {
    pub id: &'static str,
    pub passed: bool,
    pub lines: Vec<String>,
}

/// Run a demo by id; `None` for an unknown id.
pub fn run_demo(id: &str) -> Option<DemoOutcome> {
    let id = *DEMO_IDS.iter().find(|&&d| d == id)?;
    let mut lines = Vec::new();
    let passed = match id {
        "stokes-disk-minus7" => demo_stokes(&mut lines),
        "identity-suite" => demo_identities(&mut lines),
        "annulus-hole" => demo_annulus(&mut lines),
        "torus-betti" => demo_betti(&mut lines),
        "mobius-twisted-only" => demo_mobius(&mut lines),
        "ffwedge-4d" => demo_ffwedge(&mut lines),
        "gauss-point-charge" => demo_gauss(&mut lines),
        "ampere-wire" => demo_ampere(&mut lines),
        "plane-wave" => demo_plane_wave(&mut lines),
        "metric-suite" => demo_metric(&mut lines),
        "lorentz-rest-charge" => demo_lorentz(&mut lines),
        _ => unreachable!("listed id"),
    };
    Some(DemoOutcome { id, passed, lines })
}

fn check(lines: &mut Vec<String>, ok: bool, text: String) -> bool {
    lines.push(format!("[{}] {text}", if ok { "ok" } else { "FAIL" }));
    ok
}

// --- Stokes on the disk -----------------------------------------------------------------------

/// Values of the twisted 1-form on the eight rim edges, as seen by the boundary of the disk.
pub const RIM_VALUES: [i64; 8] = [-2, 1, -3, 0, -1, -2, 1, -1];

/// Disk fan of eight triangles with every cell `+`, and a twisted 1-cochain whose rim values
/// are [`RIM_VALUES`] relative to the induced boundary orientation. Spokes carry unrelated values.
pub fn stokes_disk() -> (SimplicialComplex, Cochain<Rational>, Chain) {
    let c = meshes::disk_fan(8);
    let disk = c.top_chain(&[1; 8], Parity::Twisted);
    let rim = boundary(&disk, &c).expect("valid chain");
    let mut w = Cochain::zeros(&c, 1, Parity::Twisted);
    for (i, e) in c.simplices(1).iter().enumerate() {
        if e[0] == 0 {
            w.values[i] = rat(3 * e[1] as i64 % 5 - 2);
        }
    }
    for (&edge, coeff) in &rim.coefficients {
        let e = c.simplex(1, edge);
        // Rim edge k joins ring vertices k+1 and k+2 (mod 8).
        let k = if e[1] == e[0] + 1 { e[0] - 1 } else { 7 };
        w.values[edge] = rat(RIM_VALUES[k]) / coeff;
    }
    (c, w, disk)
}

fn demo_stokes(lines: &mut Vec<String>) -> bool {
    let (c, w, disk) = stokes_disk();
    let rim = boundary(&disk, &c).expect("valid chain");
    let rim_only = rim.coefficients.len() == 8 && rim.coefficients.keys().all(|&e| c.simplex(1, e)[0] != 0);
    let dw = coboundary(&w, &c).expect("1-cochain on a surface");
    let plus = dw.values.iter().filter(|v| **v > rat(0)).count();
    let minus = dw.values.iter().filter(|v| **v < rat(0)).count();
    let (lhs, rhs) = stokes_pairing_check(&w, &disk, &c).expect("degrees match");
    let mut ok = check(lines, rim_only, "boundary of the disk is the 8-edge circle".into());
    lines.push(format!("dots of dw: {plus} positive, {minus} negative cells"));
    ok &= check(lines, lhs == rat(-7), format!("<dw, disk> = {}", format_rational(&lhs)));
    ok &= check(lines, rhs == rat(-7), format!("<w, boundary disk> = {}", format_rational(&rhs)));
    ok
}

// --- Randomized identities --------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityTally {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

pub const IDENTITY_NAMES: [&str; 7] = [
    "wedge antisymmetry",
    "d(d w) = 0",
    "Leibniz rule",
    "pullback commutes with d",
    "interior product antiderivation",
    "i_V i_V = 0",
    "Hodge double dual sign",
];

fn rand_rat(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn rand_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32) -> Poly {
    let mut p = Poly::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=max_deg) {
            e[rng.gen_range(0..n)] += 1;
        }
        p = &p + &Poly::monomial(e, rand_rat(rng));
    }
    p
}

fn rand_parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Twisted
    } else {
        Parity::Straight
    }
}

fn rand_form(rng: &mut ChaCha8Rng, n: usize, p: usize, max_deg: u32) -> PolyForm {
    let parity = rand_parity(rng);
    let terms = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut idx = sample(rng, n, p).into_vec();
            idx.sort_unstable();
            (idx, rand_poly(rng, n, max_deg))
        })
        .collect();
    PolyForm::from_terms(n, p, parity, terms).expect("sorted distinct indices")
}

fn rand_vector(rng: &mut ChaCha8Rng, n: usize) -> PolyVectorField {
    let parity = rand_parity(rng);
    PolyVectorField::new((0..n).map(|_| rand_poly(rng, n, 1)).collect(), parity)
}

/// `AᵀSA` for a random integer `A` and `S = diag(-1, 1, ..)` or the identity, so that
/// `|det g|` is a perfect square.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize, lorentzian: bool) -> Metric<Rational> {
    loop {
        let a = Matrix::from_rows(&(0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect()).collect::<Vec<_>>());
        if a.determinant() == rat(0) {
            continue;
        }
        let mut s = Matrix::identity(n);
        if lorentzian {
            s[(0, 0)] = rat(-1);
        }
        return Metric::new(a.transpose().mul(&s).mul(&a)).expect("nonsingular symmetric");
    }
}

fn sign_form(w: &PolyForm, s: i64) -> PolyForm {
    if s < 0 {
        w.neg()
    } else {
        w.clone()
    }
}

fn identity_sample(k: usize, rng: &mut ChaCha8Rng, sample_index: usize) -> Result<(bool, String), FormError> {
    let n = rng.gen_range(1..=5);
    match k {
        0 => {
            let p = rng.gen_range(0..=n);
            let q = rng.gen_range(0..=n - p);
            let (a, b) = (rand_form(rng, n, p, 2), rand_form(rng, n, q, 2));
            let lhs = a.wedge(&b)?;
            let rhs = sign_form(&b.wedge(&a)?, if p * q % 2 == 1 { -1 } else { 1 });
            Ok((lhs == rhs, format!("n={n} p={p} q={q}")))
        }
        1 => {
            let p = rng.gen_range(0..=n);
            let a = rand_form(rng, n, p, 3);
            Ok((a.d().d().is_zero(), format!("n={n} p={p}")))
        }
        2 => {
            let p = rng.gen_range(0..=n);
            let q = rng.gen_range(0..=n - p);
            let (a, b) = (rand_form(rng, n, p, 2), rand_form(rng, n, q, 2));
            let lhs = a.wedge(&b)?.d();
            let rhs = a.d().wedge(&b)?.add(&sign_form(&a.wedge(&b.d())?, if p % 2 == 1 { -1 } else { 1 }))?;
            Ok((lhs == rhs, format!("n={n} p={p} q={q}")))
        }
        3 => {
            let m = rng.gen_range(1..=5);
            let p = rng.gen_range(0..=n);
            let a = rand_form(rng, n, p, 1);
            let map = PolyMap::new(m, (0..n).map(|_| rand_poly(rng, m, 2)).collect())?;
            let lhs = a.d().pullback(&map)?;
            let rhs = a.pullback(&map)?.d();
            Ok((lhs == rhs, format!("m={m} n={n} p={p}")))
        }
        4 => {
            let p = rng.gen_range(0..=n);
            let q = rng.gen_range(usize::from(p == 0)..=n - p);
            let (a, b) = (rand_form(rng, n, p, 1), rand_form(rng, n, q, 1));
            let v = rand_vector(rng, n);
            let lhs = a.wedge(&b)?.interior(&v)?;
            let mut rhs = PolyForm::zero(n, p + q - 1, lhs.parity());
            if p > 0 {
                rhs = rhs.add(&a.interior(&v)?.wedge(&b)?)?;
            }
            if q > 0 {
                rhs = rhs.add(&sign_form(&a.wedge(&b.interior(&v)?)?, if p % 2 == 1 { -1 } else { 1 }))?;
            }
            Ok((lhs == rhs, format!("n={n} p={p} q={q}")))
        }
        5 => {
            let n = n.max(2);
            let p = rng.gen_range(2..=n);
            let a = rand_form(rng, n, p, 2);
            let v = rand_vector(rng, n);
            Ok((a.interior(&v)?.interior(&v)?.is_zero(), format!("n={n} p={p}")))
        }
        _ => {
            let lorentzian = sample_index % 2 == 1;
            let g = random_metric(rng, n, lorentzian);
            let p = rng.gen_range(0..=n);
            let a = rand_form(rng, n, p, 1);
            let sign = if p * (n - p) % 2 == 1 { -1 } else { 1 } * i64::from(g.det_sign());
            let lhs = a.hodge(&g)?.hodge(&g)?;
            Ok((lhs == sign_form(&a, sign), format!("n={n} p={p} lorentzian={lorentzian}")))
        }
    }
}

/// `samples` exact randomized checks of each identity in [`IDENTITY_NAMES`]; dimensions
/// 1..=5, and Riemannian and Lorentzian metrics alternate for the Hodge check.
pub fn identity_suite(samples: usize, seed: u64) -> Vec<IdentityTally> {
    IDENTITY_NAMES
        .iter()
        .enumerate()
        .map(|(k, &name)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let mut tally = IdentityTally { name, checks: 0, failures: 0, first_failure: None };
            for i in 0..samples {
                tally.checks += 1;
                let failure = match identity_sample(k, &mut rng, i) {
                    Ok((true, _)) => None,
                    Ok((false, what)) => Some(what),
                    Err(e) => Some(e.to_string()),
                };
                if let Some(f) = failure {
                    tally.failures += 1;
                    tally.first_failure.get_or_insert(format!("sample {i}: {f}"));
                }
            }
            tally
        })
        .collect()
}

fn demo_identities(lines: &mut Vec<String>) -> bool {
    let mut ok = true;
    for t in identity_suite(1000, 2024) {
        let mut text = format!("{}: {} checks, {} failures", t.name, t.checks, t.failures);
        if let Some(f) = &t.first_failure {
            text.push_str(&format!(" (first: {f})"));
        }
        ok &= check(lines, t.failures == 0, text);
    }
    ok
}

// --- Cohomology -------------------------------------------------------------------------------

fn demo_annulus(lines: &mut Vec<String>) -> bool {
    let a = meshes::annulus();
    let betti = betti_numbers(&a).expect("annulus is a valid complex").betti;
    let mut ok = check(lines, betti == [1, 1, 0], format!("annulus betti {betti:?}"));
    let w = winding_cochain(&a, [0.0, 0.0]);
    ok &= check(lines, is_closed(&w, &a).unwrap_or(false), "winding cochain is closed".into());
    ok &= check(lines, is_exact(&w, &a).map(|e| !e.exact).unwrap_or(false), "winding cochain is not exact".into());
    let cycle = |tuples: &[[usize; 2]]| {
        let terms: Vec<(Vec<usize>, Rational)> = tuples.iter().map(|t| (t.to_vec(), rat(1))).collect();
        let ch = Chain::from_tuples(&a, &terms, Parity::Straight).expect("edges of the annulus");
        crate::forms_dec::integrate(&w, &ch, &a).expect("straight 1-chain")
    };
    let around = cycle(&[[0, 1], [1, 2], [2, 3], [3, 0]]);
    let contractible = cycle(&[[0, 4], [4, 5], [5, 0]]);
    ok &= check(lines, around != rat(0), format!("integral around the hole = {}", format_rational(&around)));
    ok &= check(lines, contractible == rat(0), format!("integral around a contractible loop = {}", format_rational(&contractible)));
    ok
}

/// `(name, complex, expected Betti numbers, expected orientability)` for the reference surfaces.
pub fn betti_cases() -> Vec<(&'static str, SimplicialComplex, Vec<usize>, bool)> {
    vec![
        ("annulus", meshes::annulus(), vec![1, 1, 0], true),
        ("torus", meshes::torus(4, 4), vec![1, 2, 1], true),
        ("sphere", meshes::octahedron_sphere(), vec![1, 0, 1], true),
        ("disk", meshes::disk_fan(8), vec![1, 0, 0], true),
        ("mobius", meshes::mobius5(), vec![1, 1, 0], false),
    ]
}

fn demo_betti(lines: &mut Vec<String>) -> bool {
    let mut ok = true;
    for (name, c, expected, orientable) in betti_cases() {
        match betti_numbers(&c) {
            Ok(r) => {
                ok &= check(
                    lines,
                    r.betti == expected && r.orientable == orientable,
                    format!("{name}: betti {:?}, orientable {}, euler {}", r.betti, r.orientable, r.euler_characteristic()),
                );
            }
            Err(e) => ok &= check(lines, false, format!("{name}: {e}")),
        }
    }
    ok
}

// --- Twisted top forms ------------------------------------------------------------------------

/// Twist each of `count` random cochains on orientable complexes twice; returns the number of
/// round trips that did not give back the original cochain with its parity.
pub fn twist_round_trips(count: usize, seed: u64) -> usize {
    let complexes = [meshes::annulus(), meshes::torus(3, 4), meshes::disk_fan(6), meshes::square_grid(3, 2), meshes::tetrahedron()];
    let references: Vec<Vec<i32>> =
        complexes.iter().map(|c| c.orientability().ok().and_then(|o| o.signs).expect("orientable")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..count {
        let ci = rng.gen_range(0..complexes.len());
        let c = &complexes[ci];
        let flip = if rng.gen_bool(0.5) { -1 } else { 1 };
        let orientation: Vec<i32> = references[ci].iter().map(|s| s * flip).collect();
        let p = rng.gen_range(0..=c.dim());
        let values = (0..c.count(p)).map(|_| rand_rat(&mut rng)).collect();
        let w = Cochain { degree: p, values, parity: rand_parity(&mut rng) };
        let back = twist_cochain(&w, c, &orientation).and_then(|t| {
            if t.parity == w.parity {
                return Err(DecError::ParityMismatch { cochain: t.parity, chain: w.parity });
            }
            twist_cochain(&t, c, &orientation)
        });
        if back.as_ref() != Ok(&w) {
            failures += 1;
        }
    }
    failures
}

fn demo_mobius(lines: &mut Vec<String>) -> bool {
    let m = meshes::mobius_strip(7);
    let area = measure_from_metric(&m, &Metric::euclidean(2)).map(|mu| mu.total());
    let mut ok = check(
        lines,
        matches!(area, Ok(a) if (a - 7.0).abs() < 1e-12),
        format!("twisted area form on the 7-square Mobius strip integrates to {}", area.as_ref().map_or_else(|e| e.to_string(), |v| v.to_string())),
    );
    let ones = Cochain::new(&m, 2, vec![rat(1); m.count(2)], Parity::Twisted).expect("top cochain");
    let twisted = integrate_top(&ones, &m);
    ok &= check(lines, twisted == Ok(rat(14)), format!("twisted top cochain of ones: {}", twisted.as_ref().map_or_else(|e| e.to_string(), format_rational)));
    let straight = Cochain { parity: Parity::Straight, ..ones };
    let err = integrate_top(&straight, &m);
    ok &= check(
        lines,
        err == Err(DecError::OnlyTwistedTopForms),
        format!("straight top cochain: {}", err.map_or_else(|e| e.to_string(), |v| format!("unexpected value {v}"))),
    );
    let failures = twist_round_trips(1000, 7);
    ok &= check(lines, failures == 0, format!("twist round trips: 1000 checks, {failures} failures"));
    ok
}

// --- F ∧ F ------------------------------------------------------------------------------------

/// `F ∧ F` for `F = dt∧dx + dy∧dz` in coordinates `(t, x, y, z)`.
pub fn ff_wedge() -> PolyForm {
    let f = PolyForm::basis(4, &[0, 1], Parity::Straight)
        .and_then(|a| a.add(&PolyForm::basis(4, &[2, 3], Parity::Straight)?))
        .expect("valid basis forms");
    f.wedge(&f).expect("same ambient dimension")
}

fn demo_ffwedge(lines: &mut Vec<String>) -> bool {
    let ff = ff_wedge();
    let expected = PolyForm::basis(4, &[0, 1, 2, 3], Parity::Straight).expect("volume form").scale_const(&rat(2));
    let coeff = ff.coefficient(&[0, 1, 2, 3]).as_constant().map(|c| format_rational(&c)).unwrap_or_default();
    check(lines, ff == expected, format!("F^F = {coeff} dt^dx^dy^dz"))
}

// --- Statics ----------------------------------------------------------------------------------

/// Point charge `q` at the centre of a grounded `n³` unit grid; outward flux of `D` through
/// the boundaries of the vertex boxes of half-width `radii` around it.
pub fn gauss_point_charge(n: usize, q: f64, radii: &[usize]) -> Result<Vec<(usize, f64)>, MaxwellError> {
    let grid = RectGrid::bounded(vec![n; 3], vec![1.0; 3])?;
    let c = n / 2;
    let mut rho = vec![0.0; grid.count(0)];
    rho[grid.index(&[], &[c as isize; 3]).expect("centre vertex")] = q;
    let sol = solve_electrostatics(&grid, &rho, &Materials::uniform(&grid, 1.0, 1.0), 1e-10, 20_000)?;
    Ok(radii.iter().map(|&r| (r, sol.flux_report(&grid, &rho, &[c - r; 3], &[c + r; 3]).0)).collect())
}

fn demo_gauss(lines: &mut Vec<String>) -> bool {
    let q = 1.0;
    match gauss_point_charge(32, q, &[4, 8, 12]) {
        Ok(fluxes) => fluxes.iter().fold(true, |ok, &(r, flux)| {
            let rel = (flux - q).abs() / q;
            check(lines, rel <= 0.01, format!("box half-width {r}: flux {flux:.12} (relative error {rel:.2e})")) && ok
        }),
        Err(e) => check(lines, false, e.to_string()),
    }
}

/// Wire current `i_wire` along z through the middle of a `n × n` conducting box, periodic in z.
/// Returns `(linking circulation, enclosed current, non-linking circulation)`.
pub fn ampere_wire(n: usize, i_wire: f64) -> Result<(f64, f64, f64), MaxwellError> {
    let grid = RectGrid::new(vec![n, n, 2], vec![1.0; 3], vec![false, false, true])?;
    let c = n / 2;
    let j = wire_current(&grid, c, c, i_wire);
    let sol = solve_magnetostatics(&grid, &j, &Materials::uniform(&grid, 1.0, 1.0), 1e-10, 20_000)?;
    let (lo, hi) = ((n / 4, n / 4), (3 * n / 4, 3 * n / 4));
    let linking = loop_circulation(&grid, &sol.h, 0, lo, hi);
    let enclosed = enclosed_current(&grid, &j, 0, lo, hi);
    let other = loop_circulation(&grid, &sol.h, 0, (c + 2, 2), (n - 3, n - 3));
    Ok((linking, enclosed, other))
}

fn demo_ampere(lines: &mut Vec<String>) -> bool {
    let i = 2.0;
    match ampere_wire(32, i) {
        Ok((linking, enclosed, other)) => {
            let mut ok = check(
                lines,
                (linking - i).abs() <= 0.01 * i,
                format!("linking loop: circulation {linking:.12}, enclosed current {enclosed}"),
            );
            ok &= check(lines, other.abs() <= 0.01 * i, format!("non-linking loop: circulation {other:.3e}"));
            ok
        }
        Err(e) => check(lines, false, e.to_string()),
    }
}

// --- Evolution --------------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneWaveRun {
    pub cells: usize,
    pub error: f64,
    pub max_div_b: f64,
}

/// One-period plane-wave errors at Courant number `courant` for each grid size.
pub fn plane_wave_study(sizes: &[usize], courant: f64) -> Result<Vec<PlaneWaveRun>, MaxwellError> {
    sizes
        .iter()
        .map(|&n| {
            let (error, diag) = plane_wave_error(n, courant)?;
            Ok(PlaneWaveRun { cells: n, error, max_div_b: diag.max_div_b() })
        })
        .collect()
}

/// Observed orders `log2(e_i / e_{i+1})` between consecutive runs (each a grid doubling).
pub fn observed_orders(runs: &[PlaneWaveRun]) -> Vec<f64> {
    runs.windows(2).map(|w| (w[0].error / w[1].error).log2()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChargeRun {
    pub steps: usize,
    pub report: ChargeConservationReport<f64>,
    pub max_gauss_drift: f64,
    pub max_div_b: f64,
    pub charge_drift: f64,
}

/// Plane wave plus a moving unit charge on a periodic `n`-cell 1+1 grid for `steps` steps,
/// with the charge balance of a vertex box checked from the recorded `ρ` and `J` histories.
pub fn charge_conservation_run(n: usize, steps: usize) -> Result<ChargeRun, MaxwellError> {
    let h = 1.0 / n as f64;
    let dt = 0.5 * h;
    let mut state = plane_wave_state(n, dt)?;
    state.particles.push(Particle::uniform(1.0, [0.3 * h, 0.0, 0.0], [0.37, 0.0, 0.0]));
    let mut rho = Vec::with_capacity(steps + 1);
    let mut j = Vec::with_capacity(steps);
    // The first step deposits ρ at t = 0; take it from a zero-step run.
    evolve_with(&mut state, 0, dt, |_, _| {})?;
    rho.push(state.rho.clone());
    let diag = evolve_with(&mut state, steps, dt, |s, _| {
        rho.push(s.rho.clone());
        j.push(s.j.clone());
    })?;
    let lo = [n / 4, 0, 0];
    let hi = [n / 2, 0, 0];
    let report = charge_conservation_check(&state.grid, &rho, &j, &dt, &lo, &hi);
    let charge_drift = diag.records.iter().map(|r| (r.total_charge - 1.0).abs()).fold(0.0, f64::max);
    Ok(ChargeRun { steps, report, max_gauss_drift: diag.max_gauss_drift(), max_div_b: diag.max_div_b(), charge_drift })
}

fn demo_plane_wave(lines: &mut Vec<String>) -> bool {
    let runs = match plane_wave_study(&[64, 128, 256], 0.5) {
        Ok(r) => r,
        Err(e) => return check(lines, false, e.to_string()),
    };
    let mut ok = true;
    for r in &runs {
        lines.push(format!("n = {}: L2 error {:.6e}, max |dB| {:.1e}", r.cells, r.error, r.max_div_b));
        ok &= r.max_div_b <= 1e-12;
    }
    for (w, order) in runs.windows(2).zip(observed_orders(&runs)) {
        ok &= check(lines, order >= 1.8, format!("order {} -> {}: {order:.4}", w[0].cells, w[1].cells));
    }
    ok &= check(lines, runs.iter().all(|r| r.max_div_b <= 1e-12), "max |dB| per step <= 1e-12 relative".into());
    match charge_conservation_run(64, 10_000) {
        Ok(c) => {
            ok &= check(
                lines,
                c.report.closed && c.max_gauss_drift <= 1e-12 && c.charge_drift <= 1e-12,
                format!(
                    "{} steps with a moving charge: box leak {:.1e}, Gauss drift {:.1e}, total charge drift {:.1e}",
                    c.steps, c.report.leak, c.max_gauss_drift, c.charge_drift
                ),
            );
        }
        Err(e) => ok &= check(lines, false, e.to_string()),
    }
    ok
}

// --- Metric -----------------------------------------------------------------------------------

fn demo_metric(lines: &mut Vec<String>) -> bool {
    let g = Metric::<Rational>::minkowski(4);
    let rest = [rat(1), rat(0), rat(0), rat(0)];
    let moving = [ratio(5, 4), ratio(3, 4), rat(0), rat(0)];
    let exact = g.gamma_factor(&rest, &moving).map(|r| r.value);
    let mut ok = check(lines, exact == Ok(ratio(5, 4)), format!("exact gamma at speed 3/5: {}", exact.as_ref().map_or_else(|e| e.to_string(), format_rational)));
    let gf = Metric::<f64>::minkowski(4);
    let beta: f64 = 0.6;
    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let approx = gf.gamma_factor(&[1.0, 0.0, 0.0, 0.0], &[gamma, gamma * beta, 0.0, 0.0]).map(|r| r.value);
    ok &= check(
        lines,
        matches!(approx, Ok(v) if (v - 1.25).abs() <= 1e-12),
        format!("floating gamma at speed 0.6: {}", approx.as_ref().map_or_else(|e| e.to_string(), |v| v.to_string())),
    );
    for v in [[rat(1), rat(1), rat(0), rat(0)], [rat(13), rat(5), rat(12), rat(0)], [ratio(5, 2), ratio(-3, 2), rat(0), rat(2)]] {
        let self_inner = g.inner(&v, &v).expect("4-vectors");
        let lightlike = g.classify(&v).map(|c| c.0) == Ok(CausalCharacter::Lightlike);
        let complement = g.orthogonal_complement(&v).expect("nonzero vector");
        let rank = Matrix::from_rows(&complement).rank();
        let mut with_v = complement.clone();
        with_v.push(v.to_vec());
        let contains = Matrix::from_rows(&with_v).rank() == rank;
        let text: Vec<String> = v.iter().map(format_rational).collect();
        ok &= check(
            lines,
            self_inner == rat(0) && lightlike && contains,
            format!("lightlike ({}): g(V,V) = {}, V in its own orthogonal complement: {contains}", text.join(","), self_inner),
        );
    }
    let m = PolyForm::basis(3, &[0], Parity::Straight)
        .expect("dx")
        .scale_const(&ratio(7, 2))
        .magnitude_at(&[rat(0), rat(0), rat(0)], &Metric::euclidean(3));
    ok &= check(
        lines,
        matches!(&m, Ok(mag) if mag.exact == Some(ratio(7, 2))),
        format!("magnitude of 3.5 dx: {}", m.map_or_else(|e| e.to_string(), |mag| format!("{}", mag.value))),
    );
    ok
}

// --- Lorentz force ----------------------------------------------------------------------------

/// Largest `|g(f, V)|` over `samples` random unit timelike `V` (speeds below 0.9) and random
/// constant field components in `[-1, 1]`.
pub fn lorentz_orthogonality(samples: usize, seed: u64) -> Result<f64, MaxwellError> {
    let g = Metric::<f64>::minkowski(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let speed: f64 = rng.gen_range(0.0..0.9);
        let dir: Vec<f64> = loop {
            let d: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.1 {
                break d.iter().map(|x| x / norm).collect();
            }
        };
        let gamma = 1.0 / (1.0 - speed * speed).sqrt();
        let v = [gamma, gamma * speed * dir[0], gamma * speed * dir[1], gamma * speed * dir[2]];
        let mut f = Matrix::zeros(4, 4);
        for a in 0..4 {
            for b in a + 1..4 {
                let x: f64 = rng.gen_range(-1.0..1.0);
                f[(a, b)] = x;
                f[(b, a)] = -x;
            }
        }
        let q = rng.gen_range(-2.0..2.0);
        let force = lorentz_force(&q, &v, &f, &g)?;
        worst = worst.max(g.inner(&force.vector, &v).expect("4-vectors").abs());
    }
    Ok(worst)
}

/// Force on a charge `q` at rest in `F = Σ E_i dx^i ∧ dt`.
pub fn rest_charge_force(q: &Rational, e: [Rational; 3]) -> Result<Vec<Rational>, MaxwellError> {
    let mut f = Matrix::zeros(4, 4);
    for (i, ei) in e.iter().enumerate() {
        f[(i + 1, 0)] = ei.clone();
        f[(0, i + 1)] = -ei.clone();
    }
    let rest = [rat(1), rat(0), rat(0), rat(0)];
    Ok(lorentz_force(q, &rest, &f, &Metric::minkowski(4))?.vector)
}

fn demo_lorentz(lines: &mut Vec<String>) -> bool {
    let q = rat(2);
    let e = [rat(3), rat(-1), ratio(1, 2)];
    let expected: Vec<Rational> = std::iter::once(rat(0)).chain(e.iter().map(|x| &q * x)).collect();
    let mut ok = match rest_charge_force(&q, e) {
        Ok(f) => {
            let text: Vec<String> = f.iter().map(format_rational).collect();
            check(lines, f == expected, format!("charge 2 at rest in E = (3, -1, 1/2): force ({})", text.join(", ")))
        }
        Err(err) => check(lines, false, err.to_string()),
    };
    match lorentz_orthogonality(1000, 11) {
        Ok(worst) => ok &= check(lines, worst <= 1e-12, format!("max |g(f, V)| over 1000 samples: {worst:.2e}")),
        Err(err) => ok &= check(lines, false, err.to_string()),
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_demo() {
        assert!(run_demo("nope").is_none());
    }

    #[test]
    fn fast_demos_pass() {
        for id in ["stokes-disk-minus7", "annulus-hole", "torus-betti", "ffwedge-4d", "metric-suite"] {
            let out = run_demo(id).unwrap();
            assert!(out.passed, "{id}: {:#?}", out.lines);
        }
    }

    #[test]
    fn small_identity_suite() {
        for t in identity_suite(40, 3) {
            assert_eq!(t.failures, 0, "{t:?}");
        }
    }

    #[test]
    fn small_twist_and_lorentz() {
        assert_eq!(twist_round_trips(50, 1), 0);
        assert!(lorentz_orthogonality(50, 2).unwrap() < 1e-12);
    }
}
