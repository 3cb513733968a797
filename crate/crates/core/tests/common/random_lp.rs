//! Seeded generator of small mixed-bound LPs for solver cross-checks.

use hubflow_core::lp::{LinearProgram, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INF: f64 = f64::INFINITY;

fn small_int(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    rng.gen_range(lo..=hi) as f64
}

fn coefficient(rng: &mut ChaCha8Rng) -> f64 {
    let mut v = 0.0;
    while v == 0.0 {
        v = small_int(rng, -4, 4);
    }
    if rng.gen_bool(0.2) {
        v / 2.0
    } else {
        v
    }
}

/// LP number `index` of the stream seeded by `seed`: up to 8 columns and
/// 8 rows, every bound shape, all three relations, a mix of feasible,
/// infeasible and unbounded instances.
pub fn random_lp(seed: u64, index: u64) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(index));
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(0..=8);
    let mut lp = LinearProgram::new();
    let mut point = Vec::with_capacity(n);
    for _ in 0..n {
        let (l, u) = match rng.gen_range(0..100) {
            0..=34 => (0.0, INF),
            35..=59 => {
                let l = small_int(&mut rng, -3, 2);
                (l, l + small_int(&mut rng, 1, 5))
            }
            60..=69 => (-INF, INF),
            70..=79 => (-INF, small_int(&mut rng, -2, 4)),
            80..=89 => (small_int(&mut rng, -3, 3), INF),
            _ => {
                let v = small_int(&mut rng, -2, 3);
                (v, v)
            }
        };
        let c = small_int(&mut rng, -5, 5);
        lp.add_column(c, l, u);
        let lo = if l.is_finite() { l } else { u.min(3.0) - 4.0 };
        let hi = if u.is_finite() { u } else { lo + 4.0 };
        point.push(if lo == hi { lo } else { rng.gen_range(lo..=hi) });
    }
    let perturb = rng.gen_bool(0.2);
    for _ in 0..m {
        let mut entries = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.5) {
                entries.push((j, coefficient(&mut rng)));
            }
        }
        let activity: f64 = entries.iter().map(|&(j, v)| v * point[j]).sum();
        let slack = small_int(&mut rng, 0, 3);
        let (rel, mut rhs) = match rng.gen_range(0..10) {
            0..=3 => (Relation::Eq, activity),
            4..=6 => (Relation::Le, activity + slack),
            _ => (Relation::Ge, activity - slack),
        };
        if perturb && rng.gen_bool(0.5) {
            rhs += small_int(&mut rng, -6, 6);
        }
        // keep right-hand sides on a coarse grid so vertices are well conditioned
        lp.add_row(rel, (rhs * 64.0).round() / 64.0, &entries);
    }
    lp
}
