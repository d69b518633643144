//! Acyclicity of sections supported in `J±(K)`, with `Λ±` as contracting homotopy.
//!
//! The window is seeded by the cells inside `J±(K)`. On the open end of the
//! cone, cells whose `Q`-reads leave the slab drop out, which turns that end
//! into a restriction.

use crate::homotopy::{add, mismatch, sign_name, GreenHomotopy};
use crate::windows::{windowed, Window};
use ghc_green::Direction;
use ghc_homalg::{cohomology_dims, CheckResult, HomalgError, Scalar};
use ghc_lattice::{causal_future, causal_past, Coord, Region};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeSet;
use std::time::Instant;

/// A random admissible compact: one to three sites at interior times away from both ends.
pub fn random_compact(h: &GreenHomotopy, rng: &mut ChaCha8Rng) -> Vec<Coord> {
    let lat = h.fields().lattice();
    let (lo, hi) = lat.interior();
    let count = rng.gen_range(1..=3);
    (0..count)
        .map(|_| {
            let mut s = [0i64; 3];
            s[0] = rng.gen_range(lo + 1..=hi - 1);
            for (axis, e) in lat.spatial_extents().iter().enumerate() {
                s[axis + 1] = rng.gen_range(0..*e as i64);
            }
            s
        })
        .collect()
}

/// The subquotient complex of sections supported in `J±(K)`.
pub fn cone_window(h: &GreenHomotopy, dir: Direction, k: &[Coord]) -> Result<Window, HomalgError> {
    let f = h.fields();
    let lat = f.lattice();
    let k = Region::from_sites(lat, k.iter().copied());
    let j = match dir {
        Direction::Retarded => causal_future(lat, &k),
        Direction::Advanced => causal_past(lat, &k),
    };
    windowed(f, h.model().q_local(), |_, c| j.contains_cell(lat, c), |_| true)
}

fn random_section(len: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..len).map(|_| if rng.gen_bool(0.3) { Scalar::from_int(rng.gen_range(-3..=3)) } else { Scalar::zero() }).collect()
}

/// `H(F_{J±(K)}) = 0`, and `QΛ± + Λ±Q = id` on the window away from the terminal
/// boundary with `Λ±` keeping sections inside the window there.
/// `samples`: random sections per degree, or every basis section when `None`.
pub fn check_cone_acyclic(
    h: &GreenHomotopy,
    dir: Direction,
    k: &[Coord],
    samples: Option<usize>,
    buffer: i64,
    seed: u64,
) -> CheckResult {
    let t0 = Instant::now();
    let s = sign_name(dir);
    let name = format!("cone_acyclic{s}");
    let anchor = format!("H(F_J{s}(K)) = 0, contracted by L{s}");
    let win = match cone_window(h, dir, k) {
        Ok(w) => w,
        Err(e) => return CheckResult::fail(name, anchor, json!({ "error": e.to_string() })).timed(t0),
    };
    let dims = cohomology_dims(&win.complex);
    if dims.values().any(|&d| d != 0) {
        return CheckResult::fail(name, anchor, json!({ "K": k, "cohomology": dims })).timed(t0);
    }
    let f = h.fields();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome = Ok(());
    'deg: for n in f.degrees() {
        let len = win.cells(n).len();
        let tests: Vec<Vec<Scalar>> = match samples {
            None => (0..len)
                .map(|i| {
                    let mut v = vec![Scalar::zero(); len];
                    v[i] = Scalar::one();
                    v
                })
                .collect(),
            Some(c) => (0..c).map(|_| random_section(len, &mut rng)).collect(),
        };
        let obs = h.window(dir, n, buffer);
        let kept: BTreeSet<usize> = win.cells(n).iter().copied().collect();
        let obs: Vec<usize> = obs.into_iter().filter(|i| kept.contains(i)).collect();
        for (t, v) in tests.iter().enumerate() {
            let phi = win.extend(f, n, v);
            let down = h.lambda(dir, n, &phi);
            if f.has_degree(n - 1) {
                let inside: BTreeSet<usize> = win.cells(n - 1).iter().copied().collect();
                let near: BTreeSet<usize> = h.window(dir, n - 1, buffer).into_iter().collect();
                if let Some(i) = (0..down.len()).find(|i| !down[*i].is_zero() && near.contains(i) && !inside.contains(i)) {
                    outcome = Err(json!({ "K": k, "degree": n - 1, "test_vector": t, "escapes_at": f.label(n - 1, i) }));
                    break 'deg;
                }
            }
            let left = add(&h.q(n - 1, &down), &h.lambda(dir, n + 1, &h.q(n, &phi)));
            if let Some(mut w) = mismatch(f, n, &left, &phi, &obs) {
                w["K"] = json!(k);
                w["test_vector"] = json!(t);
                outcome = Err(w);
                break 'deg;
            }
        }
    }
    CheckResult::from_outcome(name, anchor, outcome).with_note(format!("window dims {:?}", win.dims())).timed(t0)
}

/// `count` random compacts per direction.
pub fn verify_acyclicity(h: &GreenHomotopy, count: usize, samples: Option<usize>, buffer: i64, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..count {
        let k = random_compact(h, &mut rng);
        for dir in [Direction::Retarded, Direction::Advanced] {
            let mut c = check_cone_acyclic(h, dir, &k, samples, buffer, seed.wrapping_add(i as u64));
            c.name = format!("{}[{i}]", c.name);
            out.push(c);
        }
    }
    out
}
