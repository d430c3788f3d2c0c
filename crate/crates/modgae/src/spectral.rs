//! Numerical verification of the spectral properties behind the
//! community-preserving operator, via a dense cyclic-Jacobi eigensolver.
//!
//! Verified claims:
//! - the normalized membership matrix `Ã(A_c)` has eigenvalues `{1}^K ∪
//!   {0}^(n−K)` with community indicators as unit eigenvectors;
//! - on graphs made of b-regular components aligned with the communities,
//!   `Ã(A)` and `Ã(A_c)` commute and the spectrum of `Ã(A + λ·A_c)` follows
//!   an affine relation in their joint eigenvalues;
//! - the s-regular sparsification keeps 1 as the largest eigenvalue with
//!   multiplicity at least K, and keeps the indicator eigenvectors.

use crate::community::{membership_matrix, regular_block_feasible, sparsify, Partition};
use crate::error::{Error, Result};
use crate::graph::symmetric_normalize;
use crate::sparse::CsrMatrix;
use ndarray::{Array1, Array2};

/// Eigendecomposition of a symmetric matrix: eigenvalues sorted descending,
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Array1<f64>,
    pub eigenvectors: Array2<f64>,
}

/// Outcome of one proposition check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub detail: String,
}

impl CheckReport {
    fn new(name: impl Into<String>, passed: bool, worst: f64, detail: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed,
            worst_residual: worst,
            detail: detail.into(),
        }
    }
}

/// Cyclic Jacobi diagonalization of a symmetric matrix.
///
/// Sweeps rotate away every off-diagonal pair until the off-diagonal
/// Frobenius norm drops below `1e-12 · ‖M‖_F`.
pub fn eigendecompose(m: &Array2<f64>) -> Result<EigenSystem> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Contract(
            "eigendecompose needs a square matrix".into(),
        ));
    }
    if n > 2000 {
        return Err(Error::Contract(format!(
            "dense eigensolver is limited to n <= 2000, got {n}"
        )));
    }
    let asym = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (m[(i, j)] - m[(j, i)]).abs())
        .fold(0.0f64, f64::max);
    if asym > 1e-12 {
        return Err(Error::Contract(format!(
            "matrix is not symmetric: max |M - Mᵀ| = {asym:e}"
        )));
    }

    let mut a = m.clone();
    let mut v = Array2::<f64>::eye(n);
    let norm_f = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = 1e-12 * norm_f.max(f64::MIN_POSITIVE);

    let off_norm = |a: &Array2<f64>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };

    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // rotation angle that annihilates a_pq
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());
    let eigenvalues = Array1::from_iter(order.iter().map(|&i| a[(i, i)]));
    let mut eigenvectors = Array2::<f64>::zeros((n, n));
    for (new, &old) in order.iter().enumerate() {
        eigenvectors.column_mut(new).assign(&v.column(old));
    }
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn normalized_dense(a: &CsrMatrix) -> Array2<f64> {
    symmetric_normalize(a).matrix().to_dense()
}

fn indicator_residual(op: &Array2<f64>, members: &[Vec<usize>]) -> f64 {
    let n = op.nrows();
    let mut worst = 0.0f64;
    for nodes in members {
        let mut v = Array1::<f64>::zeros(n);
        for &i in nodes {
            v[i] = 1.0;
        }
        let out = op.dot(&v);
        for i in 0..n {
            worst = worst.max((out[i] - v[i]).abs());
        }
    }
    worst
}

/// `Ã(A_c)` has eigenvalue 1 with multiplicity exactly K (community
/// indicators as eigenvectors) and eigenvalue 0 with multiplicity n−K.
pub fn check_prop1(p: &Partition) -> Result<CheckReport> {
    const TOL: f64 = 1e-8;
    let ac = membership_matrix(p);
    let op = normalized_dense(ac.matrix());
    let eig = eigendecompose(&op)?;

    let ones = eig
        .eigenvalues
        .iter()
        .filter(|&&e| (e - 1.0).abs() < TOL)
        .count();
    let zeros = eig.eigenvalues.iter().filter(|&&e| e.abs() < TOL).count();
    let spectrum_ok = ones == p.k() && zeros == p.n() - p.k();
    let worst_spec = eig
        .eigenvalues
        .iter()
        .map(|&e| (e - 1.0).abs().min(e.abs()))
        .fold(0.0f64, f64::max);

    let worst_ind = indicator_residual(&op, &p.members());
    let passed = spectrum_ok && worst_ind < TOL;
    Ok(CheckReport::new(
        format!("prop1 n={} K={}", p.n(), p.k()),
        passed,
        worst_spec.max(worst_ind),
        format!(
            "unit eigenvalues {}/{} zero eigenvalues {}/{} indicator residual {:.2e}",
            ones,
            p.k(),
            zeros,
            p.n() - p.k(),
            worst_ind
        ),
    ))
}

/// Regular family used by the Proposition 2 check: K components of size
/// `n_prime`, each b-regular (circulant ring lattices; the complete graph for
/// `b = n_prime - 1`).
pub fn regular_components(b: usize, n_prime: usize, k: usize) -> Result<CsrMatrix> {
    if b >= n_prime {
        return Err(Error::parameter(
            "b",
            "regular degree must satisfy b < n_prime",
        ));
    }
    if b % 2 == 1 && b != n_prime - 1 && n_prime % 2 == 1 {
        return Err(Error::parameter(
            "b",
            "odd regular degree needs an even component size",
        ));
    }
    let mut trip = Vec::new();
    for comp in 0..k {
        let base = comp * n_prime;
        if b == n_prime - 1 {
            for i in 0..n_prime {
                for j in (i + 1)..n_prime {
                    trip.push((base + i, base + j, 1.0));
                    trip.push((base + j, base + i, 1.0));
                }
            }
            continue;
        }
        for i in 0..n_prime {
            for dist in 1..=(b / 2) {
                let j = (i + dist) % n_prime;
                trip.push((base + i, base + j, 1.0));
                trip.push((base + j, base + i, 1.0));
            }
        }
        if b % 2 == 1 {
            for i in 0..n_prime / 2 {
                let j = i + n_prime / 2;
                trip.push((base + i, base + j, 1.0));
                trip.push((base + j, base + i, 1.0));
            }
        }
    }
    let n = k * n_prime;
    Ok(CsrMatrix::from_triplets(n, n, trip))
}

/// On b-regular components aligned with the communities, `Ã(A)` and `Ã(A_c)`
/// commute, and the spectrum of `Ã(A + λ·A_c)` equals
/// `{ g1(θ_i) + g2(η_{s(i)}) }` over joint eigenpairs, with
/// `g1(θ) = (b+1)/(b+λ(n′−1)+1) · (θ−1)` and
/// `g2(η) = λ·n′/(b+λ(n′−1)+1) · (η−1) + 1`.
///
/// Per component the joint pairing puts the component's unit eigenvalue of
/// `Ã(A)` with η = 1 and every other eigenvalue with η = 0.
pub fn check_prop2(b: usize, n_prime: usize, k: usize, lambda: f64) -> Result<CheckReport> {
    const TOL_COMMUTE: f64 = 1e-8;
    const TOL_SPECTRUM: f64 = 1e-7;
    if lambda < 0.0 {
        return Err(Error::parameter("lambda", "must be >= 0"));
    }
    let a = regular_components(b, n_prime, k)?;
    let n = k * n_prime;
    let raw: Vec<usize> = (0..n).map(|i| i / n_prime).collect();
    let p = Partition::from_assignments(&raw)?;
    let ac = membership_matrix(&p);

    let op_a = normalized_dense(&a);
    let op_ac = normalized_dense(ac.matrix());
    let commutator = op_a.dot(&op_ac) - op_ac.dot(&op_a);
    let comm_residual = commutator.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    // direct spectrum of the combined operator
    let combined = a.add_scaled(ac.matrix(), lambda);
    let op_sum = normalized_dense(&combined);
    let direct = eigendecompose(&op_sum)?.eigenvalues;

    // predicted spectrum from the affine relation, one component at a time
    let denom = b as f64 + lambda * (n_prime as f64 - 1.0) + 1.0;
    let g1 = |theta: f64| (b as f64 + 1.0) / denom * (theta - 1.0);
    let g2 = |eta: f64| lambda * n_prime as f64 / denom * (eta - 1.0) + 1.0;
    let component = regular_components(b, n_prime, 1)?;
    let comp_thetas = eigendecompose(&normalized_dense(&component))?.eigenvalues;
    let mut predicted: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..k {
        // largest θ is the component's unit eigenvalue, paired with η = 1
        predicted.push(g1(comp_thetas[0]) + g2(1.0));
        for &theta in comp_thetas.iter().skip(1) {
            predicted.push(g1(theta) + g2(0.0));
        }
    }
    predicted.sort_by(|x, y| y.partial_cmp(x).unwrap());

    let spec_residual = direct
        .iter()
        .zip(&predicted)
        .map(|(d, p)| (d - p).abs())
        .fold(0.0f64, f64::max);

    let passed = comm_residual < TOL_COMMUTE && spec_residual < TOL_SPECTRUM;
    Ok(CheckReport::new(
        format!("prop2 b={b} n'={n_prime} K={k} lambda={lambda}"),
        passed,
        comm_residual.max(spec_residual),
        format!("commutator {comm_residual:.2e} spectrum {spec_residual:.2e}"),
    ))
}

/// `Ã(A_c^(s))` keeps 1 as its largest eigenvalue with multiplicity >= K and
/// keeps every community indicator as a unit eigenvector. Requires an exactly
/// regular sparsification for every community.
pub fn check_prop3(p: &Partition, s: usize, seed: u64) -> Result<CheckReport> {
    const TOL: f64 = 1e-8;
    if let Some(bad) = p
        .sizes()
        .iter()
        .find(|&&nk| !regular_block_feasible(nk, s))
    {
        return Err(Error::parameter(
            "s",
            format!("no s-regular block exists for community size {bad} with s={s}"),
        ));
    }
    let sp = sparsify(p, s, seed)?;
    let op = normalized_dense(sp.matrix());
    let eig = eigendecompose(&op)?;

    let largest = eig.eigenvalues[0];
    let multiplicity = eig
        .eigenvalues
        .iter()
        .filter(|&&e| (e - 1.0).abs() < TOL)
        .count();
    let above = eig.eigenvalues.iter().filter(|&&e| e > 1.0 + TOL).count();
    let worst_ind = indicator_residual(&op, &p.members());
    let gap = if multiplicity < eig.eigenvalues.len() {
        1.0 - eig.eigenvalues[multiplicity]
    } else {
        f64::NAN
    };

    let passed =
        (largest - 1.0).abs() < TOL && above == 0 && multiplicity >= p.k() && worst_ind < TOL;
    Ok(CheckReport::new(
        format!("prop3 n={} K={} s={s}", p.n(), p.k()),
        passed,
        (largest - 1.0).abs().max(worst_ind),
        format!(
            "unit multiplicity {} (K={}) indicator residual {:.2e} eigengap {gap:.3}",
            multiplicity,
            p.k(),
            worst_ind
        ),
    ))
}

/// Spectrum of a block-diagonal operator equals the sorted merge of the
/// per-component spectra. Exercised once directly on a 2-component graph.
pub fn check_component_union(a1: &CsrMatrix, a2: &CsrMatrix) -> Result<CheckReport> {
    const TOL: f64 = 1e-8;
    let n1 = a1.n_rows();
    let n2 = a2.n_rows();
    let mut trip: Vec<(usize, usize, f64)> = a1.iter().collect();
    trip.extend(a2.iter().map(|(i, j, v)| (i + n1, j + n1, v)));
    let merged = CsrMatrix::from_triplets(n1 + n2, n1 + n2, trip);

    let direct = eigendecompose(&normalized_dense(&merged))?.eigenvalues;
    let mut expect: Vec<f64> = eigendecompose(&normalized_dense(a1))?
        .eigenvalues
        .to_vec();
    expect.extend(eigendecompose(&normalized_dense(a2))?.eigenvalues.to_vec());
    expect.sort_by(|x, y| y.partial_cmp(x).unwrap());

    let worst = direct
        .iter()
        .zip(&expect)
        .map(|(d, e)| (d - e).abs())
        .fold(0.0f64, f64::max);
    Ok(CheckReport::new(
        format!("component union n1={n1} n2={n2}"),
        worst < TOL,
        worst,
        format!("merged spectrum residual {worst:.2e}"),
    ))
}
