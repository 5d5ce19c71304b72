//! Built-in named examples and a deterministic random example generator.
//!
//! The named actions ("trivial", "swap2", "shift3") are the ones with
//! known closed-form K-theory; the random generator produces actions that
//! are exact by construction: the block permutation is assembled from
//! cycles whose lengths divide n, and the per-cycle unitaries are closed
//! up so that the implementing unitary W satisfies Wⁿ = I on the nose.

use num_complex::Complex64;

use crate::action::{ActionSpec, ZnAction};
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rng::SplitMix64;

/// The trivial ℤₙ-action (identity automorphism) on ⊕ M_d.
pub fn trivial_action(
    block_dims: &[usize],
    n: usize,
    tol: f64,
    xi_exponent: usize,
) -> Result<ZnAction> {
    let algebra = FiniteAlgebra::multimatrix(block_dims, tol)?;
    let spec = ActionSpec::identity(algebra.ambient_dim(), block_dims.len());
    ZnAction::new(algebra, spec, n, xi_exponent)
}

/// The order-2 swap of the two summands of ℂ².
pub fn swap_c2(tol: f64) -> Result<ZnAction> {
    swap_c2_with_xi(tol, 1)
}

pub fn swap_c2_with_xi(tol: f64, xi_exponent: usize) -> Result<ZnAction> {
    let algebra = FiniteAlgebra::multimatrix(&[1, 1], tol)?;
    let spec = ActionSpec {
        unitary: ComplexMatrix::identity(2),
        block_permutation: vec![1, 0],
    };
    ZnAction::new(algebra, spec, 2, xi_exponent)
}

/// The order-3 cyclic shift of the three summands of ℂ³.
pub fn shift_c3(tol: f64) -> Result<ZnAction> {
    shift_c3_with_xi(tol, 1)
}

pub fn shift_c3_with_xi(tol: f64, xi_exponent: usize) -> Result<ZnAction> {
    let algebra = FiniteAlgebra::multimatrix(&[1, 1, 1], tol)?;
    let spec = ActionSpec {
        unitary: ComplexMatrix::identity(3),
        block_permutation: vec![1, 2, 0],
    };
    ZnAction::new(algebra, spec, 3, xi_exponent)
}

/// Looks up a named built-in action. "trivial" takes its algebra and n
/// from the arguments; "swap2" and "shift3" are fixed and reject
/// inconsistent overrides.
pub fn by_name(
    name: &str,
    block_dims: Option<&[usize]>,
    n: Option<usize>,
    tol: f64,
    xi_exponent: usize,
) -> Result<ZnAction> {
    match name {
        "trivial" => {
            let dims = block_dims.unwrap_or(&[1]);
            let n =
                n.ok_or_else(|| Error::InvalidArgument("builtin 'trivial' requires n".into()))?;
            trivial_action(dims, n, tol, xi_exponent)
        }
        "swap2" => {
            if n.is_some_and(|v| v != 2) {
                return Err(Error::InvalidArgument("builtin 'swap2' has n = 2".into()));
            }
            swap_c2_with_xi(tol, xi_exponent)
        }
        "shift3" => {
            if n.is_some_and(|v| v != 3) {
                return Err(Error::InvalidArgument("builtin 'shift3' has n = 3".into()));
            }
            shift_c3_with_xi(tol, xi_exponent)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown builtin action '{other}'"
        ))),
    }
}

/// Haar-ish random unitary from two-pass Gram–Schmidt on a random complex
/// matrix.
pub fn random_unitary(d: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    'outer: loop {
        let mut cols: Vec<Vec<Complex64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.next_complex()).collect())
            .collect();
        for j in 0..d {
            for _ in 0..2 {
                for i in 0..j {
                    let dot: Complex64 = cols[j]
                        .iter()
                        .zip(&cols[i])
                        .map(|(a, b)| a * b.conj())
                        .sum();
                    let prev = cols[i].clone();
                    for (x, p) in cols[j].iter_mut().zip(&prev) {
                        *x -= dot * p;
                    }
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue 'outer;
            }
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        }
        let mut u = ComplexMatrix::zeros(d, d);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                u[(i, j)] = v;
            }
        }
        return u;
    }
}

/// Random unitary whose n-th power is exactly the identity: conjugate a
/// diagonal of n-th roots of unity by a random unitary.
fn random_root_unitary(d: usize, n: usize, step: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    let v = random_unitary(d, rng);
    let phases: Vec<Complex64> = (0..d)
        .map(|_| {
            let m = rng.next_below(n.max(1)) as f64;
            let angle = 2.0 * std::f64::consts::PI * (step as f64) * m / (n as f64);
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    v.mul(&ComplexMatrix::diag(&phases))
        .unwrap()
        .mul(&v.adjoint())
        .unwrap()
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Random multi-matrix algebra plus an order-dividing-n action on it.
///
/// Block dims are drawn from {1,2,3} with total ambient at most
/// `max_total`; the block permutation is a product of cycles with lengths
/// dividing n; per-cycle unitaries are closed up so Wⁿ = I exactly.
pub fn random_action(
    n: usize,
    max_total: usize,
    tol: f64,
    rng: &mut SplitMix64,
) -> Result<ZnAction> {
    // Block dimensions.
    let mut dims: Vec<usize> = Vec::new();
    let mut total = 0usize;
    loop {
        let d = rng.next_range(1, 3) as usize;
        if total + d > max_total {
            break;
        }
        dims.push(d);
        total += d;
        if total >= max_total || (dims.len() >= 2 && rng.next_f64() < 0.2) {
            break;
        }
    }
    if dims.is_empty() {
        dims.push(1);
    }

    // Permutation from cycles of length dividing n, within equal-dim
    // groups.
    let m = dims.len();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for d in 1..=3usize {
        let mut group: Vec<usize> = (0..m).filter(|&i| dims[i] == d).collect();
        rng.shuffle(&mut group);
        let divs = divisors(n);
        let mut pos = 0;
        while pos < group.len() {
            let feasible: Vec<usize> = divs
                .iter()
                .copied()
                .filter(|&l| l <= group.len() - pos)
                .collect();
            let len = feasible[rng.next_below(feasible.len())];
            let cycle: Vec<usize> = group[pos..pos + len].to_vec();
            for t in 0..len {
                perm[cycle[t]] = cycle[(t + 1) % len];
            }
            cycles.push(cycle);
            pos += len;
        }
    }

    // Per-block unitaries, closed up around each cycle so the cycle
    // product is an (n/L)-th root of the identity.
    let mut block_unitaries: Vec<ComplexMatrix> =
        dims.iter().map(|&d| ComplexMatrix::identity(d)).collect();
    for cycle in &cycles {
        let d = dims[cycle[0]];
        let len = cycle.len();
        if len == 1 {
            block_unitaries[cycle[0]] = random_root_unitary(d, n, 1, rng);
            continue;
        }
        // Traversal i0 -> i1 -> ... applies U_{i1}, then U_{i2}, ...; the
        // cycle product seen from i0 is U_{i0} U_{i_{L-1}} ... U_{i1}.
        let mut partial = ComplexMatrix::identity(d);
        for t in (1..len).rev() {
            let u_t = random_unitary(d, rng);
            partial = partial.mul(&u_t)?;
            block_unitaries[cycle[t]] = u_t;
        }
        let target = random_root_unitary(d, n, len, rng);
        block_unitaries[cycle[0]] = target.mul(&partial.adjoint())?;
    }

    let algebra = FiniteAlgebra::multimatrix(&dims, tol)?;
    let layout = algebra.layout().expect("multimatrix layout");
    let total_n = layout.total();

    // ActionSpec encodes alpha = Ad(U · P_pi); the per-slot unitaries above
    // act after the permutation, so U is their block diagonal.
    let mut u = ComplexMatrix::zeros(total_n, total_n);
    for (b, ub) in block_unitaries.iter().enumerate() {
        u.set_block(layout.offsets()[b], layout.offsets()[b], ub);
    }

    let spec = ActionSpec {
        unitary: u,
        block_permutation: perm,
    };
    ZnAction::new(algebra, spec, n, 1)
}

/// Deterministic 50-example battery: the named examples with known
/// closed-form K-theory plus random actions across n ∈ {2,3,4,6} at
/// assorted sizes (block dims ≤ 3, ambient ≤ 12).
pub fn acceptance_battery(seed: u64, tol: f64) -> Result<Vec<(String, ZnAction)>> {
    let mut rng = SplitMix64::new(seed);
    let mut out: Vec<(String, ZnAction)> = vec![
        ("trivial-c-n2".into(), trivial_action(&[1], 2, tol, 1)?),
        ("trivial-c-n3".into(), trivial_action(&[1], 3, tol, 1)?),
        ("trivial-c-n4".into(), trivial_action(&[1], 4, tol, 1)?),
        ("trivial-c-n6".into(), trivial_action(&[1], 6, tol, 1)?),
        ("swap2".into(), swap_c2(tol)?),
        ("shift3".into(), shift_c3(tol)?),
    ];
    let plan: &[(usize, usize, usize)] = &[
        // (n, max ambient, how many)
        (2, 6, 8),
        (2, 10, 3),
        (2, 12, 1),
        (3, 6, 8),
        (3, 8, 2),
        (3, 9, 1),
        (4, 6, 8),
        (4, 8, 2),
        (6, 4, 8),
        (6, 6, 3),
    ];
    for &(n, cap, count) in plan {
        for c in 0..count {
            let act = loop {
                match random_action(n, cap, tol, &mut rng) {
                    Ok(a) => break a,
                    Err(_) => continue,
                }
            };
            let dims: Vec<usize> = act.algebra().layout().expect("layout").dims().to_vec();
            out.push((format!("rnd-n{n}-cap{cap}-{c}-{dims:?}"), act));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;

    #[test]
    fn named_examples_validate() {
        assert!(swap_c2(DEFAULT_TOL).is_ok());
        assert!(shift_c3(DEFAULT_TOL).is_ok());
        assert!(trivial_action(&[2, 1], 6, DEFAULT_TOL, 1).is_ok());
    }

    #[test]
    fn by_name_rejects_unknown_and_inconsistent() {
        assert!(by_name("swap2", None, Some(2), DEFAULT_TOL, 1).is_ok());
        assert!(by_name("swap2", None, Some(3), DEFAULT_TOL, 1).is_err());
        assert!(by_name("nope", None, None, DEFAULT_TOL, 1).is_err());
        assert!(by_name("trivial", Some(&[2]), Some(4), DEFAULT_TOL, 1).is_ok());
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = SplitMix64::new(17);
        for d in 1..=4 {
            let u = random_unitary(d, &mut rng);
            let gap = u
                .mul(&u.adjoint())
                .unwrap()
                .distance(&ComplexMatrix::identity(d));
            assert!(gap < 1e-12, "d = {d}, gap = {gap}");
        }
    }

    #[test]
    fn root_unitary_has_exact_order() {
        let mut rng = SplitMix64::new(23);
        for (n, step) in [(2, 1), (4, 2), (6, 3), (6, 1)] {
            let u = random_root_unitary(3, n, step, &mut rng);
            let mut p = ComplexMatrix::identity(3);
            for _ in 0..(n / step) {
                p = p.mul(&u).unwrap();
            }
            assert!(p.distance(&ComplexMatrix::identity(3)) < 1e-12);
        }
    }

    #[test]
    fn random_actions_validate_across_orders() {
        let mut rng = SplitMix64::new(5);
        for n in [2usize, 3, 4, 6] {
            for _ in 0..3 {
                let act = random_action(n, 6, DEFAULT_TOL, &mut rng).unwrap();
                assert_eq!(act.order(), n);
                let total: usize = (0..n).map(|k| act.eigenspace(k).dim()).sum();
                assert_eq!(total, act.algebra().dim());
            }
        }
    }

    #[test]
    fn battery_is_deterministic_and_sized() {
        let a = acceptance_battery(42, DEFAULT_TOL).unwrap();
        let b = acceptance_battery(42, DEFAULT_TOL).unwrap();
        assert_eq!(a.len(), 50);
        assert_eq!(b.len(), 50);
        for ((na, aa), (nb, ab)) in a.iter().zip(&b) {
            assert_eq!(na, nb);
            assert_eq!(aa.algebra().dim(), ab.algebra().dim());
            for (x, y) in aa
                .spec()
                .unitary
                .data()
                .iter()
                .zip(ab.spec().unitary.data())
            {
                assert_eq!(x, y);
            }
        }
        for n in [2usize, 3, 4, 6] {
            assert!(a.iter().any(|(_, act)| act.order() == n));
        }
    }
}
