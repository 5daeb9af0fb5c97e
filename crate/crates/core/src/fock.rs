//! Truncated full Fock space over the alphabet of triples (i, j, k) and the
//! matrix model X_N with free-creation-operator entries.
//!
//! Words of length ≤ D index the basis; creation prepends a letter (top
//! depth maps to zero), annihilation is its adjoint.  Every moment of order
//! m only visits words of depth ≤ m/2, so truncation at D = ⌈m/2⌉ is exact,
//! and with entries that are integer combinations of ℓ's scaled by
//! (2N)^{−1/2}, even moments are rationals with denominator N·(2N)^{m/2} —
//! computed here in exact integer arithmetic.  The model is deterministic;
//! no sampling anywhere.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact moment value: numerator over N·(2N)^{m/2}.
pub type ExactMoment = Ratio<i128>;

/// Word-indexed basis of the Fock space truncated at depth D.
#[derive(Debug, Clone)]
pub struct FockBasis {
    /// Matrix size N of the model.
    pub n: usize,
    /// Number of colors K.
    pub k: usize,
    /// Truncation depth D.
    pub depth: usize,
    /// Alphabet size N²K.
    pub alphabet: usize,
    /// offsets[l] = index of the first word of length l.
    offsets: Vec<usize>,
    /// powers[l] = alphabet^l.
    powers: Vec<usize>,
    /// Total dimension Σ_{l ≤ D} alphabet^l.
    pub dim: usize,
}

/// Build the basis for alphabet triples (i, j, k), 1 ≤ i, j ≤ N, 1 ≤ k ≤ K.
pub fn build_fock(n: usize, k: usize, depth: usize) -> Result<FockBasis> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidInput("fock model needs N ≥ 1, K ≥ 1".into()));
    }
    let alphabet = n * n * k;
    let mut offsets = Vec::with_capacity(depth + 2);
    let mut powers = Vec::with_capacity(depth + 1);
    let mut dim = 0usize;
    let mut p = 1usize;
    for _ in 0..=depth {
        offsets.push(dim);
        powers.push(p);
        dim = dim
            .checked_add(p)
            .ok_or_else(|| Error::SizeLimit("fock dimension overflow".into()))?;
        p = match p.checked_mul(alphabet) {
            Some(v) => v,
            None => usize::MAX, // only consulted if depth demands it
        };
    }
    offsets.push(dim);
    if dim > 1_000_000 {
        return Err(Error::SizeLimit(format!(
            "fock dimension {dim} exceeds the 10⁶ budget"
        )));
    }
    Ok(FockBasis { n, k, depth, alphabet, offsets, powers, dim })
}

impl FockBasis {
    /// Letter index of the generator triple (i, j, color), all 1-based.
    pub fn letter(&self, i: usize, j: usize, color: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.n && j >= 1 && j <= self.n && color >= 1);
        ((i - 1) * self.n + (j - 1)) * self.k + (color - 1)
    }
}

/// A primitive operator on the word basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Prim {
    /// ℓ(g): prepend letter g (top depth annihilated by truncation).
    Create(usize),
    /// ℓ(g)*: strip a leading letter g.
    Annihilate(usize),
}

impl Prim {
    fn adjoint(self) -> Prim {
        match self {
            Prim::Create(g) => Prim::Annihilate(g),
            Prim::Annihilate(g) => Prim::Create(g),
        }
    }
}

/// Integer combination of primitives, scaled by ((2N)^{−1/2})^{scale_pow}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockOperator {
    pub terms: Vec<(i32, Prim)>,
    pub scale_pow: u32,
}

impl FockOperator {
    fn canonical(mut self) -> Self {
        self.terms.sort_by_key(|&(_, p)| p);
        let mut merged: Vec<(i32, Prim)> = Vec::with_capacity(self.terms.len());
        for (c, p) in self.terms {
            match merged.last_mut() {
                Some((lc, lp)) if *lp == p => *lc += c,
                _ => merged.push((c, p)),
            }
        }
        merged.retain(|&(c, _)| c != 0);
        self.terms = merged;
        self
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            terms: self.terms.iter().map(|&(c, p)| (c, p.adjoint())).collect(),
            scale_pow: self.scale_pow,
        }
        .canonical()
    }
}

/// Scalars the sparse application runs over (exact integers or floats).
pub trait FockScalar:
    Copy + Zero + std::ops::AddAssign + std::ops::Mul<Output = Self> + From<i32> + PartialEq
{
}
impl FockScalar for i128 {}
impl FockScalar for f64 {}

/// dst += coeff · prim(src) over the truncated basis.
fn apply_prim<S: FockScalar>(
    basis: &FockBasis,
    prim: Prim,
    coeff: i32,
    src: &[S],
    dst: &mut [S],
) {
    let c = S::from(coeff);
    match prim {
        Prim::Create(g) => {
            // words of length < D gain the letter as most significant digit
            for len in 0..basis.depth {
                let base_src = basis.offsets[len];
                let base_dst = basis.offsets[len + 1] + g * basis.powers[len];
                for v in 0..basis.powers[len] {
                    let x = src[base_src + v];
                    if x != S::zero() {
                        dst[base_dst + v] += c * x;
                    }
                }
            }
        }
        Prim::Annihilate(g) => {
            for len in 1..=basis.depth {
                let stride = basis.powers[len - 1];
                let base_src = basis.offsets[len] + g * stride;
                let base_dst = basis.offsets[len - 1];
                for v in 0..stride {
                    let x = src[base_src + v];
                    if x != S::zero() {
                        dst[base_dst + v] += c * x;
                    }
                }
            }
        }
    }
}

fn apply_operator<S: FockScalar>(
    basis: &FockBasis,
    op: &FockOperator,
    src: &[S],
    dst: &mut [S],
) {
    for &(c, p) in &op.terms {
        apply_prim(basis, p, c, src, dst);
    }
}

/// The N×N operator matrix X_N(color) with entries
/// (2N)^{−1/2}·[ℓ(i,j,k) + ℓ(j,i,k) + ℓ(i,j,k)* + ℓ(j,i,k)*].
pub fn matrix_xn(basis: &FockBasis, color: usize) -> Vec<Vec<FockOperator>> {
    let n = basis.n;
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            let gij = basis.letter(i, j, color);
            let gji = basis.letter(j, i, color);
            let op = FockOperator {
                terms: vec![
                    (1, Prim::Create(gij)),
                    (1, Prim::Create(gji)),
                    (1, Prim::Annihilate(gij)),
                    (1, Prim::Annihilate(gji)),
                ],
                scale_pow: 1,
            }
            .canonical();
            row.push(op);
        }
        rows.push(row);
    }
    rows
}

type State<S> = Vec<Vec<S>>;

fn fresh_state<S: FockScalar>(basis: &FockBasis) -> State<S> {
    vec![vec![S::zero(); basis.dim]; basis.n]
}

fn apply_matrix<S: FockScalar>(
    basis: &FockBasis,
    m: &[Vec<FockOperator>],
    state: &State<S>,
) -> State<S> {
    let mut out = fresh_state::<S>(basis);
    for (i, row) in m.iter().enumerate() {
        for (j, op) in row.iter().enumerate() {
            apply_operator(basis, op, &state[j], &mut out[i]);
        }
    }
    out
}

// vacuum-normalized trace of a word of operator matrices applied to e_a⊗Ω,
// summed over a: returns the integer numerator; the caller divides by
// N·(2N)^{Σ scale_pow / 2}.
fn vacuum_numerator(basis: &FockBasis, word: &[&[Vec<FockOperator>]]) -> i128 {
    let mut total: i128 = 0;
    for a in 0..basis.n {
        let mut state = fresh_state::<i128>(basis);
        state[a][0] = 1;
        for m in word.iter().rev() {
            state = apply_matrix(basis, m, &state);
        }
        total += state[a][0];
    }
    total
}

fn word_scale(basis: &FockBasis, word_len: usize) -> Result<i128> {
    // denominator N·(2N)^{len/2} for even-length words
    if word_len % 2 != 0 {
        return Err(Error::InvalidInput("scale only defined for even words".into()));
    }
    let mut d: i128 = basis.n as i128;
    for _ in 0..word_len / 2 {
        d = d
            .checked_mul(2 * basis.n as i128)
            .ok_or_else(|| Error::SizeLimit("moment denominator overflow".into()))?;
    }
    Ok(d)
}

/// ψ_N of a word of operator matrices (exact).  Odd words vanish.
pub fn psi_n_word_exact(
    basis: &FockBasis,
    word: &[&[Vec<FockOperator>]],
) -> Result<ExactMoment> {
    let required = word.len().div_ceil(2);
    if basis.depth < required {
        return Err(Error::TruncationTooShallow { depth: basis.depth, required });
    }
    let num = vacuum_numerator(basis, word);
    if word.len() % 2 == 1 {
        debug_assert_eq!(num, 0, "odd words must have no vacuum component");
        return Ok(ExactMoment::zero());
    }
    Ok(ExactMoment::new(num, word_scale(basis, word.len())?))
}

/// ψ_N(X^m) in exact rational arithmetic.
pub fn psi_n_moment_exact(
    basis: &FockBasis,
    xn: &[Vec<FockOperator>],
    m: usize,
) -> Result<ExactMoment> {
    let word: Vec<&[Vec<FockOperator>]> = (0..m).map(|_| xn).collect();
    psi_n_word_exact(basis, &word)
}

/// ψ_N(X^m) in floating point (the exact value rounded once).
pub fn psi_n_moment(basis: &FockBasis, xn: &[Vec<FockOperator>], m: usize) -> Result<f64> {
    let v = psi_n_moment_exact(basis, xn, m)?;
    Ok(*v.numer() as f64 / *v.denom() as f64)
}

/// Exact violation of the four L_N(k) relations on the depth-(D−1) subspace:
///   L*L′ = δ_{kk′},  (Lᵗ)*L′ᵗ = δ_{kk′},  (Lᵗ)*L′ = δ_{kk′}/N,  L*L′ᵗ = δ_{kk′}/N.
/// Products of two ℓ-matrices have exactly rational entries, so the expected
/// result is integer arithmetic and the violation is exact.
pub fn check_l_relations(basis: &FockBasis) -> Result<f64> {
    let n = basis.n;
    let lmat = |color: usize, transpose: bool| -> Vec<Vec<FockOperator>> {
        (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| {
                        let (a, b) = if transpose { (j, i) } else { (i, j) };
                        FockOperator {
                            terms: vec![(1, Prim::Create(basis.letter(a, b, color)))],
                            scale_pow: 1,
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let adjoint_mat = |m: &[Vec<FockOperator>]| -> Vec<Vec<FockOperator>> {
        (0..n)
            .map(|i| (0..n).map(|j| m[j][i].adjoint()).collect())
            .collect()
    };

    let mut worst: i128 = 0;
    for k1 in 1..=basis.k {
        for k2 in 1..=basis.k {
            let delta = k1 == k2;
            // (left adjointed · right, expected numerator over N)
            let cases: [(Vec<Vec<FockOperator>>, Vec<Vec<FockOperator>>, i128); 4] = [
                (lmat(k1, false), lmat(k2, false), if delta { n as i128 } else { 0 }),
                (lmat(k1, true), lmat(k2, true), if delta { n as i128 } else { 0 }),
                (lmat(k1, true), lmat(k2, false), if delta { 1 } else { 0 }),
                (lmat(k1, false), lmat(k2, true), if delta { 1 } else { 0 }),
            ];
            for (left, right, expected) in cases {
                let left_adj = adjoint_mat(&left);
                // restrict to vectors of depth ≤ D−1, where ℓ*ℓ is exact
                let safe_dim = basis.offsets[basis.depth];
                for b in 0..n {
                    for idx in 0..safe_dim {
                        let mut state = fresh_state::<i128>(basis);
                        state[b][idx] = 1;
                        let state = apply_matrix(basis, &right, &state);
                        let state = apply_matrix(basis, &left_adj, &state);
                        for (i, comp) in state.iter().enumerate() {
                            for (pos, &v) in comp.iter().enumerate() {
                                let want =
                                    if i == b && pos == idx { expected } else { 0 };
                                worst = worst.max((v - want).abs());
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(worst as f64 / n as f64)
}

/// Extract the infinitesimal law (μ, μ′) from exact moments as functions of
/// N: moment m is a polynomial of degree ≤ ⌈m/2⌉ in 1/N, interpolated
/// exactly from N = 1, …, deg+1; μ is the constant term, μ′ the 1/N
/// coefficient.
pub fn infinitesimal_law_extract(
    moment_fn: &dyn Fn(usize) -> Result<Vec<BigRational>>,
    m_max: usize,
) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let mut mu = Vec::with_capacity(m_max);
    let mut mu_prime = Vec::with_capacity(m_max);
    // cache per-N moment vectors
    let deg_max = m_max.div_ceil(2);
    let mut cache: Vec<Vec<BigRational>> = Vec::new();
    for n in 1..=deg_max + 1 {
        cache.push(moment_fn(n)?);
    }
    for m in 1..=m_max {
        if m % 2 == 1 {
            mu.push(BigRational::zero());
            mu_prime.push(BigRational::zero());
            continue;
        }
        let deg = m / 2;
        // interpolation nodes x = 1/N, N = 1..=deg+1
        let pts: Vec<(BigRational, BigRational)> = (1..=deg + 1)
            .map(|n| {
                (
                    BigRational::new(BigInt::one(), BigInt::from(n)),
                    cache[n - 1][m - 1].clone(),
                )
            })
            .collect();
        let coeffs = lagrange_coefficients(&pts);
        mu.push(coeffs.first().cloned().unwrap_or_else(BigRational::zero));
        mu_prime.push(coeffs.get(1).cloned().unwrap_or_else(BigRational::zero));
    }
    Ok((mu, mu_prime))
}

// Exact coefficients (ascending) of the Lagrange interpolant.
fn lagrange_coefficients(pts: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = pts.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        // numerator polynomial Π_{j≠i} (x − x_j)
        let mut poly = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in pts.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] += c.clone();
                next[d] -= c.clone() * xj.clone();
            }
            poly = next;
            denom *= pts[i].0.clone() - xj.clone();
        }
        let scale = pts[i].1.clone() / denom;
        for (d, c) in poly.into_iter().enumerate() {
            acc[d] += c * scale.clone();
        }
    }
    acc
}

/// Exact even moments of X_N up to order `m_max`, as big rationals, with
/// the depth chosen minimally.
pub fn xn_moments_exact(n: usize, m_max: usize) -> Result<Vec<BigRational>> {
    let basis = build_fock(n, 1, m_max.div_ceil(2))?;
    let xn = matrix_xn(&basis, 1);
    (1..=m_max)
        .map(|m| {
            let v = psi_n_moment_exact(&basis, &xn, m)?;
            Ok(BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nc::catalan;

    #[test]
    fn dimensions() {
        assert_eq!(build_fock(1, 1, 2).unwrap().dim, 3);
        assert_eq!(build_fock(2, 1, 3).unwrap().dim, 85);
        assert_eq!(build_fock(2, 1, 8).unwrap().dim, 87381);
        assert!(matches!(build_fock(4, 2, 8), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn xn_is_self_adjoint_and_symmetric() {
        let basis = build_fock(3, 1, 2).unwrap();
        let xn = matrix_xn(&basis, 1);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(xn[i][j], xn[j][i], "Xᵗ = X fails at ({i},{j})");
                assert_eq!(xn[i][j].adjoint(), xn[j][i], "X* = X fails at ({i},{j})");
            }
        }
    }

    #[test]
    fn vacuum_expectation_of_entries_vanishes() {
        let basis = build_fock(2, 1, 2).unwrap();
        let xn = matrix_xn(&basis, 1);
        // any single entry has zero vacuum expectation (odd word)
        for i in 0..2 {
            let mut state = fresh_state::<i128>(&basis);
            state[i][0] = 1;
            let out = apply_matrix(&basis, &xn, &state);
            assert_eq!(out[i][0], 0);
        }
    }

    #[test]
    fn semicircular_moments_exact() {
        for n in 1..=3usize {
            let basis = build_fock(n, 1, 3).unwrap();
            let xn = matrix_xn(&basis, 1);
            for nn in 1..=3usize {
                let m = 2 * nn;
                let got = psi_n_moment_exact(&basis, &xn, m).unwrap();
                // C_n (1 + 1/N)^n = C_n (N+1)^n / N^n
                let want = ExactMoment::new(
                    catalan(nn) as i128 * (n as i128 + 1).pow(nn as u32),
                    (n as i128).pow(nn as u32),
                );
                assert_eq!(got, want, "N = {n}, m = {m}");
                // odd moments vanish
                assert!(psi_n_moment_exact(&basis, &xn, m - 1).unwrap().is_zero());
            }
        }
        // headline values
        let basis = build_fock(2, 1, 2).unwrap();
        let xn = matrix_xn(&basis, 1);
        assert_eq!(psi_n_moment(&basis, &xn, 2).unwrap(), 1.5);
        let basis = build_fock(2, 1, 3).unwrap();
        let xn = matrix_xn(&basis, 1);
        assert_eq!(psi_n_moment(&basis, &xn, 4).unwrap(), 4.5);
    }

    #[test]
    fn n2_eighth_moment_float() {
        let basis = build_fock(2, 1, 4).unwrap();
        let xn = matrix_xn(&basis, 1);
        let got = psi_n_moment(&basis, &xn, 8).unwrap();
        let want = catalan(4) as f64 * 1.5f64.powi(4);
        assert!((got - want).abs() < 1e-12 * want);
    }

    #[test]
    fn truncation_guard_and_depth_sufficiency() {
        let basis = build_fock(2, 1, 2).unwrap();
        let xn = matrix_xn(&basis, 1);
        assert!(matches!(
            psi_n_moment_exact(&basis, &xn, 6),
            Err(Error::TruncationTooShallow { .. })
        ));
        // moments agree at depth ⌈m/2⌉ and one deeper
        for m in [2usize, 4] {
            let b1 = build_fock(2, 1, m / 2).unwrap();
            let b2 = build_fock(2, 1, m / 2 + 1).unwrap();
            let v1 = psi_n_moment_exact(&b1, &matrix_xn(&b1, 1), m).unwrap();
            let v2 = psi_n_moment_exact(&b2, &matrix_xn(&b2, 1), m).unwrap();
            assert_eq!(v1, v2);
        }
    }

    #[test]
    fn l_relations_hold_exactly() {
        for (n, k) in [(1usize, 1usize), (2, 1), (2, 2), (3, 1)] {
            let basis = build_fock(n, k, 2).unwrap();
            assert_eq!(check_l_relations(&basis).unwrap(), 0.0, "N={n}, K={k}");
        }
    }

    #[test]
    fn multi_color_freeness_probe() {
        // ψ_N(X(1)X(2)X(1)X(2)) = 0 exactly; ψ_N(X(1)X(1)X(2)X(2)) = (1+1/N)²
        for n in [2usize, 3] {
            let basis = build_fock(n, 2, 2).unwrap();
            let x1 = matrix_xn(&basis, 1);
            let x2 = matrix_xn(&basis, 2);
            let alt = psi_n_word_exact(&basis, &[&x1, &x2, &x1, &x2]).unwrap();
            assert!(alt.is_zero(), "alternating word at N = {n}");
            let grouped = psi_n_word_exact(&basis, &[&x1, &x1, &x2, &x2]).unwrap();
            let want = ExactMoment::new((n as i128 + 1).pow(2), (n as i128).pow(2));
            assert_eq!(grouped, want);
        }
        // dual prediction from the cumulant engine: word (0,0,1,1) → 1 + 2ħ,
        // i.e. ψ_N = 1 + 2/N + O(1/N²); word (0,1,0,1) → 0 + 0ħ
        use crate::dualnum::Dual;
        let semi_dual: Vec<Dual<BigRational>> = (1..=4)
            .map(|m| {
                if m % 2 == 0 {
                    let c = BigRational::from_integer(BigInt::from(catalan(m / 2)));
                    Dual::new(
                        c.clone(),
                        c * BigRational::from_integer(BigInt::from(m as i64 / 2)),
                    )
                } else {
                    Dual::new(BigRational::zero(), BigRational::zero())
                }
            })
            .collect();
        let alt =
            crate::nc::infinitesimal_free_mixed_moment(&semi_dual, &semi_dual, &[0, 1, 0, 1])
                .unwrap();
        assert!(alt.re.is_zero() && alt.inf.is_zero());
        let gr =
            crate::nc::infinitesimal_free_mixed_moment(&semi_dual, &semi_dual, &[0, 0, 1, 1])
                .unwrap();
        assert!(gr.re.is_one());
        assert_eq!(gr.inf, BigRational::from_integer(BigInt::from(2)));
        // the (1/N)-coefficient of the grouped word: exact interpolation
        // through N = 2, 3 of 1 + 2/N + 1/N² is not linear, so fit the
        // quadratic and read the linear coefficient
        let vals: Vec<(BigRational, BigRational)> = [2usize, 3, 4]
            .iter()
            .map(|&n| {
                let basis = build_fock(n, 2, 2).unwrap();
                let x1 = matrix_xn(&basis, 1);
                let x2 = matrix_xn(&basis, 2);
                let v = psi_n_word_exact(&basis, &[&x1, &x1, &x2, &x2]).unwrap();
                (
                    BigRational::new(BigInt::one(), BigInt::from(n)),
                    BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom())),
                )
            })
            .collect();
        let coeffs = lagrange_coefficients(&vals);
        assert_eq!(coeffs[0], BigRational::one());
        assert_eq!(coeffs[1], BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn infinitesimal_extraction() {
        let (mu, mu_prime) =
            infinitesimal_law_extract(&|n| xn_moments_exact(n, 6), 6).unwrap();
        // μ(t^{2k}) = C_k, μ′(t^{2k}) = k·C_k; odd moments vanish
        for k in 1..=3usize {
            let ck = BigRational::from_integer(BigInt::from(catalan(k)));
            assert_eq!(mu[2 * k - 1], ck);
            assert_eq!(
                mu_prime[2 * k - 1],
                BigRational::from_integer(BigInt::from(k as u64 * catalan(k)))
            );
            assert!(mu[2 * k - 2].is_zero());
            assert!(mu_prime[2 * k - 2].is_zero());
        }
        // m = 4: μ = 2, μ′ = 4 = B₂; m = 6: μ = 5, μ′ = 15 = B₃
        assert_eq!(mu[3], BigRational::from_integer(BigInt::from(2)));
        assert_eq!(mu_prime[3], BigRational::from_integer(BigInt::from(4)));
        assert_eq!(mu[5], BigRational::from_integer(BigInt::from(5)));
        assert_eq!(mu_prime[5], BigRational::from_integer(BigInt::from(15)));
    }

    #[test]
    fn counts_match_type_b_pairings() {
        // μ′(t^{2k}) = B_k from the cover count
        let (_, mu_prime) = infinitesimal_law_extract(&|n| xn_moments_exact(n, 6), 6).unwrap();
        for k in 1..=3usize {
            let (_, bk) = crate::nc::count_b_pairings(k).unwrap();
            assert_eq!(mu_prime[2 * k - 1], BigRational::from_integer(BigInt::from(bk)));
        }
    }
}
