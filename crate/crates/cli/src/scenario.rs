//! Scenario files for the Maxwell subcommands.
//!
//! ```text
//! shape = 32 32 32
//! spacing = 1 1 1
//! periodic = false false false
//! material = 0 0 0 16 32 32 4 1     # lo(3) hi(3) eps mu, cells lo..hi
//! charge = 16 16 16 1               # vertex i j k, charge
//! box = 12 12 12 20 20 20           # flux probe, vertex box lo..=hi
//! wire = 16 16 2                    # z wire through vertex column i j, current
//! loop = 0 8 8 24 24                # circulation probe: level k, lo i j, hi i j
//! particle = 1 0.3 0.5 0.5 0.1 0 0  # charge, position, velocity
//! plane_wave = true
//! steps = 1000
//! courant = 0.5                     # or dt = ...
//! tol = 1e-10
//! max_iter = 20000
//! name = run
//! ```

use extcalc::grid::RectGrid;
use extcalc::io::{parse_list, IoError, Scenario};
use extcalc::maxwell::{Materials, Particle, Probe};

pub const STATIC_E_KEYS: &[&str] = &["shape", "spacing", "periodic", "material", "charge", "box", "tol", "max_iter", "name"];
pub const STATIC_B_KEYS: &[&str] = &["shape", "spacing", "periodic", "material", "wire", "loop", "tol", "max_iter", "name"];
pub const EVOLVE_KEYS: &[&str] =
    &["shape", "spacing", "periodic", "material", "particle", "box", "loop", "plane_wave", "steps", "courant", "dt", "name"];

fn err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, message: message.into() }
}

pub fn check_keys(s: &Scenario, allowed: &[&str]) -> Result<(), IoError> {
    match s.keys().find(|(k, _)| !allowed.contains(k)) {
        Some((k, line)) => Err(err(line, format!("unknown key {k:?} (allowed: {})", allowed.join(", ")))),
        None => Ok(()),
    }
}

fn fixed<T: std::str::FromStr + Clone>(value: &str, line: usize, key: &str, n: usize) -> Result<Vec<T>, IoError> {
    let v: Vec<T> = parse_list(value, line, key)?;
    if v.len() != n {
        return Err(err(line, format!("{key} needs {n} values, got {}", v.len())));
    }
    Ok(v)
}

pub fn grid(s: &Scenario, default_periodic: bool) -> Result<RectGrid, IoError> {
    let (shape, line) = s.list::<usize>("shape")?.ok_or_else(|| err(0, "missing key shape"))?;
    if shape.len() != 3 {
        return Err(err(line, "shape needs 3 values"));
    }
    let spacing = match s.get("spacing") {
        Some((v, l)) => fixed(v, l, "spacing", 3)?,
        None => vec![1.0; 3],
    };
    let periodic = match s.get("periodic") {
        Some((v, l)) => fixed(v, l, "periodic", 3)?,
        None => vec![default_periodic; 3],
    };
    RectGrid::new(shape, spacing, periodic).map_err(|e| err(line, e.to_string()))
}

pub fn materials(s: &Scenario, grid: &RectGrid) -> Result<Materials, IoError> {
    let mut m = Materials::uniform(grid, 1.0, 1.0);
    for (v, line) in s.get_all("material") {
        let x: Vec<f64> = fixed(v, line, "material", 8)?;
        let idx = |a: &[f64]| -> Result<Vec<usize>, IoError> {
            a.iter()
                .map(|&c| if c >= 0.0 && c.fract() == 0.0 { Ok(c as usize) } else { Err(err(line, format!("bad cell index {c}"))) })
                .collect()
        };
        if !(x[6] > 0.0 && x[7] > 0.0) {
            return Err(err(line, "eps and mu must be positive"));
        }
        m.set_block(grid, &idx(&x[0..3])?, &idx(&x[3..6])?, x[6], x[7]);
    }
    Ok(m)
}

fn vertex(grid: &RectGrid, line: usize, ijk: &[usize]) -> Result<usize, IoError> {
    let base: Vec<isize> = ijk.iter().map(|&x| x as isize).collect();
    let ext: Vec<usize> = (0..3).map(|a| grid.vertex_extent(a)).collect();
    if ijk.iter().zip(&ext).any(|(&x, &e)| x >= e) {
        return Err(err(line, format!("vertex {ijk:?} outside the grid (extent {ext:?})")));
    }
    grid.index(&[], &base).ok_or_else(|| err(line, format!("vertex {ijk:?} outside the grid")))
}

pub fn charges(s: &Scenario, grid: &RectGrid) -> Result<Vec<f64>, IoError> {
    let mut rho = vec![0.0; grid.count(0)];
    for (v, line) in s.get_all("charge") {
        let x: Vec<f64> = fixed(v, line, "charge", 4)?;
        let ijk: Vec<usize> = x[..3].iter().map(|&c| c as usize).collect();
        if x[..3].iter().any(|c| *c < 0.0 || c.fract() != 0.0) {
            return Err(err(line, "charge position must be a vertex index triple"));
        }
        rho[vertex(grid, line, &ijk)?] += x[3];
    }
    Ok(rho)
}

pub fn boxes(s: &Scenario, grid: &RectGrid) -> Result<Vec<([usize; 3], [usize; 3])>, IoError> {
    s.get_all("box")
        .into_iter()
        .map(|(v, line)| {
            let x: Vec<usize> = fixed(v, line, "box", 6)?;
            vertex(grid, line, &x[..3])?;
            vertex(grid, line, &x[3..])?;
            if (0..3).any(|a| x[a] > x[3 + a]) {
                return Err(err(line, "box lo must not exceed hi"));
            }
            Ok(([x[0], x[1], x[2]], [x[3], x[4], x[5]]))
        })
        .collect()
}

pub fn loops(s: &Scenario, grid: &RectGrid) -> Result<Vec<(usize, (usize, usize), (usize, usize))>, IoError> {
    let ext: Vec<usize> = (0..3).map(|a| grid.vertex_extent(a)).collect();
    s.get_all("loop")
        .into_iter()
        .map(|(v, line)| {
            let x: Vec<usize> = fixed(v, line, "loop", 5)?;
            if x[0] >= grid.shape()[2] || x[1] >= x[3] || x[2] >= x[4] || x[3] >= grid.shape()[0] || x[4] >= grid.shape()[1] {
                return Err(err(line, format!("loop must satisfy lo < hi inside the cells of the grid (vertex extent {ext:?})")));
            }
            Ok((x[0], (x[1], x[2]), (x[3], x[4])))
        })
        .collect()
}

pub fn wires(s: &Scenario, grid: &RectGrid) -> Result<Vec<(usize, usize, f64)>, IoError> {
    s.get_all("wire")
        .into_iter()
        .map(|(v, line)| {
            let x: Vec<f64> = fixed(v, line, "wire", 3)?;
            if x[..2].iter().any(|c| *c < 0.0 || c.fract() != 0.0) {
                return Err(err(line, "wire position must be a vertex column i j"));
            }
            vertex(grid, line, &[x[0] as usize, x[1] as usize, 0])?;
            Ok((x[0] as usize, x[1] as usize, x[2]))
        })
        .collect()
}

pub fn particles(s: &Scenario) -> Result<Vec<Particle>, IoError> {
    s.get_all("particle")
        .into_iter()
        .map(|(v, line)| {
            let x: Vec<f64> = fixed(v, line, "particle", 7)?;
            Ok(Particle::uniform(x[0], [x[1], x[2], x[3]], [x[4], x[5], x[6]]))
        })
        .collect()
}

pub fn probes(s: &Scenario, grid: &RectGrid) -> Result<Vec<Probe>, IoError> {
    let mut out: Vec<Probe> = boxes(s, grid)?.into_iter().map(|(lo, hi)| Probe::BoxFlux { lo, hi }).collect();
    out.extend(loops(s, grid)?.into_iter().map(|(k, lo, hi)| Probe::Loop { k, lo, hi }));
    Ok(out)
}

pub fn name(s: &Scenario, default: &str) -> String {
    s.get("name").map_or_else(|| default.to_string(), |(v, _)| v.to_string())
}
