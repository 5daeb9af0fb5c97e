//! Non-crossing partition combinatorics, type B pairings, and the
//! moment ↔ cumulant transforms over a commutative coefficient ring.
//!
//! The transforms are generic over [`RingScalar`], so the same code runs
//! over `f64`, `Complex64`, exact rationals, and dual numbers.  Moments and
//! cumulants relate through
//!
//!   m_n = Σ_{π ∈ NC(n)} Π_{F ∈ π} κ_{|F|},
//!
//! the sum running over non-crossing partitions of {1, …, n}; inversion is
//! a triangular recursion on the same sum (division-free, hence exact over
//! rationals).  Type B pairings of {±1, …, ±n} are produced by lifting type
//! A pairings through the (k+1)-to-one cover given by the choice of a zero
//! block seed.

use num_traits::{One, Zero};

use crate::dualnum::{Dual, DualComplex, RingScalar};
use crate::error::{Error, Result};

/// Catalan number C_n = binom(2n, n)/(n+1).
pub fn catalan(n: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as u64
}

/// Magnitude used for residual reporting on generic coefficients.
pub trait ScalarNorm {
    fn mag(&self) -> f64;
}

impl ScalarNorm for f64 {
    fn mag(&self) -> f64 {
        self.abs()
    }
}

impl ScalarNorm for num_complex::Complex64 {
    fn mag(&self) -> f64 {
        self.norm()
    }
}

impl ScalarNorm for num_rational::BigRational {
    fn mag(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::INFINITY).abs()
    }
}

impl<T: ScalarNorm> ScalarNorm for Dual<T> {
    fn mag(&self) -> f64 {
        self.re.mag().max(self.inf.mag())
    }
}

/// A non-crossing partition of {1, …, n} (type A).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCPartitionA {
    pub n: usize,
    /// Blocks sorted internally and by least element.
    pub blocks: Vec<Vec<usize>>,
}

impl NCPartitionA {
    pub fn is_pairing(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }
}

/// Crossing test on arbitrary integer-labelled blocks in a fixed linear order.
///
/// Two blocks cross iff they interleave: positions a < b < c < d with
/// a, c in one block and b, d in the other.
fn blocks_cross(b1: &[i64], b2: &[i64]) -> bool {
    // Sort b2's elements into the gaps of b1 (b1 sorted).  The blocks
    // interleave iff b2 meets two distinct gaps, at least one of which is
    // interior; hitting only the two exterior gaps is plain nesting.
    let gap_of = |x: i64| -> usize { b1.partition_point(|&v| v < x) };
    let mut first: Option<usize> = None;
    let mut distinct = false;
    let mut interior = false;
    for &x in b2 {
        let g = gap_of(x);
        if 0 < g && g < b1.len() {
            interior = true;
        }
        match first {
            None => first = Some(g),
            Some(prev) if prev != g => distinct = true,
            _ => {}
        }
    }
    distinct && interior
}

/// True when no two blocks interleave in the given linear order.
pub fn is_noncrossing(blocks: &[Vec<i64>]) -> bool {
    for i in 0..blocks.len() {
        for j in (i + 1)..blocks.len() {
            if blocks_cross(&blocks[i], &blocks[j]) {
                return false;
            }
        }
    }
    true
}

/// All non-crossing partitions of {1, …, n}; |result| = C_n.
pub fn enumerate_nc(n: usize) -> Result<Vec<NCPartitionA>> {
    if n == 0 || n > 12 {
        return Err(Error::SizeLimit(format!(
            "non-crossing partition enumeration supports 1 ≤ n ≤ 12, got {n}"
        )));
    }
    Ok(nc_range(1, n + 1)
        .into_iter()
        .map(|blocks| NCPartitionA { n, blocks })
        .collect())
}

// Partitions of the interval [lo, hi) by recursive first-block placement:
// the block containing `lo` is grown element by element; each skipped gap
// is partitioned independently.
fn nc_range(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo >= hi {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    grow_first_block(&mut vec![lo], lo + 1, hi, &mut Vec::new(), &mut out);
    out
}

fn grow_first_block(
    block: &mut Vec<usize>,
    cursor: usize,
    hi: usize,
    gaps: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    // Option 1: stop here; the remaining interval [cursor, hi) is a gap.
    {
        gaps.push((cursor, hi));
        emit_products(block, gaps, out);
        gaps.pop();
    }
    // Option 2: extend the block with some nxt ∈ [cursor, hi).
    for nxt in cursor..hi {
        block.push(nxt);
        gaps.push((cursor, nxt));
        grow_first_block(block, nxt + 1, hi, gaps, out);
        gaps.pop();
        block.pop();
    }
}

fn emit_products(
    block: &[usize],
    gaps: &[(usize, usize)],
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    // Cartesian product of the independent gap partitions.
    let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![block.to_vec()]];
    for &(lo, hi) in gaps {
        if lo >= hi {
            continue;
        }
        let sub = nc_range(lo, hi);
        let mut next = Vec::with_capacity(acc.len() * sub.len());
        for a in &acc {
            for s in &sub {
                let mut v = a.clone();
                v.extend(s.iter().cloned());
                next.push(v);
            }
        }
        acc = next;
    }
    for mut p in acc {
        p.sort_by_key(|b| b[0]);
        out.push(p);
    }
}

/// All non-crossing pairings of {1, …, m}; empty for odd m, C_{m/2} pairings
/// otherwise.
pub fn enumerate_nc_pairings(m: usize) -> Result<Vec<NCPartitionA>> {
    if m > 16 {
        return Err(Error::SizeLimit(format!(
            "pairing enumeration supports m ≤ 16, got {m}"
        )));
    }
    if m % 2 == 1 {
        return Ok(Vec::new());
    }
    Ok(pairings_range(1, m + 1)
        .into_iter()
        .map(|mut blocks| {
            blocks.sort_by_key(|b| b[0]);
            NCPartitionA { n: m, blocks }
        })
        .collect())
}

fn pairings_range(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo >= hi {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    // lo pairs with a partner leaving even-sized independent intervals
    let mut partner = lo + 1;
    while partner < hi {
        let inner = pairings_range(lo + 1, partner);
        let outer = pairings_range(partner + 1, hi);
        for i in &inner {
            for o in &outer {
                let mut p = vec![vec![lo, partner]];
                p.extend(i.iter().cloned());
                p.extend(o.iter().cloned());
                out.push(p);
            }
        }
        partner += 2;
    }
    out
}

/// A non-crossing pairing of type B on {±1, …, ±n}: inversion-symmetric,
/// non-crossing in the circular order 1, …, n, −1, …, −n, with all blocks
/// pairs except an optional zero block {i, j, −i, −j}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCPairingB {
    pub n: usize,
    /// Two-element blocks, each sorted by the linear position order,
    /// the list sorted lexicographically.
    pub pairs: Vec<(i64, i64)>,
    /// The zero block as {i, j, −i, −j} with 0 < i < j, if present.
    pub zero_block: Option<[i64; 4]>,
}

/// Position of a signed label in the linear cut 1, …, n, −1, …, −n.
fn b_position(x: i64, n: usize) -> i64 {
    if x > 0 {
        x
    } else {
        n as i64 - x // −1 ↦ n+1, −2 ↦ n+2, …
    }
}

impl NCPairingB {
    /// Blocks as position-sorted vectors in the linear cut order.
    fn position_blocks(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut blocks: Vec<Vec<i64>> = self
            .pairs
            .iter()
            .map(|&(a, b)| vec![b_position(a, n), b_position(b, n)])
            .collect();
        if let Some(z) = self.zero_block {
            blocks.push(z.iter().map(|&x| b_position(x, n)).collect());
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks
    }

    /// Structural validity: inversion symmetry, zero-block shape,
    /// non-crossing in the circular order.
    pub fn is_valid(&self) -> bool {
        let n = self.n as i64;
        let mut seen = std::collections::BTreeSet::new();
        let mut all_pairs: Vec<(i64, i64)> = self.pairs.clone();
        if let Some(z) = self.zero_block {
            let pos: Vec<i64> = z.iter().copied().filter(|&x| x > 0).collect();
            if pos.len() != 2 {
                return false;
            }
            let (i, j) = (pos[0].min(pos[1]), pos[0].max(pos[1]));
            let mut want = [i, j, -i, -j];
            want.sort_unstable();
            let mut have = z;
            have.sort_unstable();
            if want != have {
                return false;
            }
            for &x in &z {
                seen.insert(x);
            }
        }
        for &(a, b) in &self.pairs {
            seen.insert(a);
            seen.insert(b);
        }
        if seen.len() != 2 * self.n || seen.iter().any(|&x| x == 0 || x.abs() > n) {
            return false;
        }
        // inversion symmetry of the pair blocks
        all_pairs.sort_unstable();
        for &(a, b) in &self.pairs {
            let neg = norm_pair(-a, -b, self.n);
            if all_pairs.binary_search(&neg).is_err() {
                return false;
            }
        }
        // sign-mixed pairs occur only around a zero block: without one,
        // every pair lives entirely in the positives or the negatives
        if self.zero_block.is_none()
            && self.pairs.iter().any(|&(a, b)| (a > 0) != (b > 0))
        {
            return false;
        }
        is_noncrossing(&self.position_blocks())
    }

    /// Forget signs: the type A pairing |π| on {1, …, n}.
    pub fn abs(&self) -> NCPartitionA {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut push = |a: i64, b: i64| {
            let (x, y) = (a.unsigned_abs() as usize, b.unsigned_abs() as usize);
            let blk = vec![x.min(y), x.max(y)];
            if !blocks.contains(&blk) {
                blocks.push(blk);
            }
        };
        for &(a, b) in &self.pairs {
            push(a, b);
        }
        if let Some(z) = self.zero_block {
            let pos: Vec<i64> = z.iter().copied().filter(|&x| x > 0).collect();
            push(pos[0], pos[1]);
        }
        blocks.sort_by_key(|b| b[0]);
        NCPartitionA { n: self.n, blocks }
    }
}

fn norm_pair(a: i64, b: i64, n: usize) -> (i64, i64) {
    let (pa, pb) = (b_position(a, n), b_position(b, n));
    if pa <= pb {
        (a, b)
    } else {
        (b, a)
    }
}

/// The unique type B pairing covering `base` with zero block seeded by `k`.
///
/// For k = {i, j} the zero block is {i, j, −i, −j}; a block {p, q} of the
/// base enclosing the seed (p < i < j < q) lifts to the mixed pair
/// {p, −q}, {−p, q}, every other block to {p, q}, {−p, −q}.  With k = None
/// there is no zero block and every block lifts unmixed.
pub fn lift_pairing_b(base: &NCPartitionA, k: Option<&[usize]>) -> Result<NCPairingB> {
    if !base.is_pairing() || base.n % 2 != 0 {
        return Err(Error::InvalidBlock);
    }
    let n = base.n;
    if let Some(kb) = k {
        let mut kb_sorted = kb.to_vec();
        kb_sorted.sort_unstable();
        if !base.blocks.iter().any(|b| *b == kb_sorted) {
            return Err(Error::InvalidBlock);
        }
        let (i, j) = (kb_sorted[0] as i64, kb_sorted[1] as i64);
        let mut pairs = Vec::new();
        for b in &base.blocks {
            let (p, q) = (b[0] as i64, b[1] as i64);
            if (p, q) == (i, j) {
                continue;
            }
            if p < i && j < q {
                pairs.push(norm_pair(p, -q, n));
                pairs.push(norm_pair(-p, q, n));
            } else {
                pairs.push(norm_pair(p, q, n));
                pairs.push(norm_pair(-p, -q, n));
            }
        }
        pairs.sort_unstable();
        let mut zero = [i, j, -i, -j];
        zero.sort_unstable();
        Ok(NCPairingB { n, pairs, zero_block: Some(zero) })
    } else {
        let mut pairs = Vec::new();
        for b in &base.blocks {
            let (p, q) = (b[0] as i64, b[1] as i64);
            pairs.push(norm_pair(p, q, n));
            pairs.push(norm_pair(-p, -q, n));
        }
        pairs.sort_unstable();
        Ok(NCPairingB { n, pairs, zero_block: None })
    }
}

/// All type B pairings of size 2n, generated through the cover.
pub fn enumerate_b_pairings(n: usize) -> Result<Vec<NCPairingB>> {
    if n > 8 {
        return Err(Error::SizeLimit(format!(
            "type B pairing enumeration supports n ≤ 8, got {n}"
        )));
    }
    let bases = enumerate_nc_pairings(2 * n)?;
    let mut out = Vec::new();
    for base in &bases {
        out.push(lift_pairing_b(base, None)?);
        for blk in &base.blocks {
            out.push(lift_pairing_b(base, Some(blk))?);
        }
    }
    Ok(out)
}

/// (total, with zero block) counts of type B pairings of size 2n:
/// (n+1)·C_n and B_n = n·C_n.
pub fn count_b_pairings(n: usize) -> Result<(u64, u64)> {
    let all = enumerate_b_pairings(n)?;
    let with_zero = all.iter().filter(|p| p.zero_block.is_some()).count() as u64;
    Ok((all.len() as u64, with_zero))
}

/// m_n = Σ_{π ∈ NC(n)} Π_{F ∈ π} κ_{|F|} for n = 1, …, len; coefficients in
/// any commutative ring (dual numbers included).
pub fn moments_from_cumulants<S: RingScalar>(kappa: &[S], len: usize) -> Result<Vec<S>> {
    if len > 12 {
        return Err(Error::SizeLimit(format!(
            "moment-cumulant transforms support length ≤ 12, got {len}"
        )));
    }
    let mut m = Vec::with_capacity(len);
    for n in 1..=len {
        let mut total = S::zero();
        for part in enumerate_nc(n)? {
            let mut prod = S::one();
            let mut vanish = false;
            for f in &part.blocks {
                if f.len() > kappa.len() {
                    vanish = true;
                    break;
                }
                prod = prod * kappa[f.len() - 1].clone();
            }
            if !vanish {
                total = total + prod;
            }
        }
        m.push(total);
    }
    Ok(m)
}

/// Inverse of [`moments_from_cumulants`] by triangular recursion:
/// κ_n = m_n − Σ_{π ≠ 1_n} Π κ_{|F|}.  Division-free, so exact over exact
/// coefficient rings.
pub fn cumulants_from_moments<S: RingScalar>(m: &[S], len: usize) -> Result<Vec<S>> {
    if len > 12 {
        return Err(Error::SizeLimit(format!(
            "moment-cumulant transforms support length ≤ 12, got {len}"
        )));
    }
    let mut kappa: Vec<S> = Vec::with_capacity(len);
    for n in 1..=len {
        let mut lower = S::zero();
        for part in enumerate_nc(n)? {
            if part.blocks.len() == 1 {
                continue;
            }
            let mut prod = S::one();
            for f in &part.blocks {
                prod = prod * kappa[f.len() - 1].clone();
            }
            lower = lower + prod;
        }
        let mn = m.get(n - 1).cloned().unwrap_or_else(S::zero);
        kappa.push(mn - lower);
    }
    Ok(kappa)
}

// Truncated power-series product: degree-indexed coefficients c[0] ↔ Z¹.
fn series_mul<S: RingScalar>(a: &[S], b: &[S], len: usize) -> Vec<S> {
    let mut out = vec![S::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let deg = i + j + 2; // both indices are degree−1
            if deg <= len {
                out[deg - 1] = out[deg - 1].clone() + ai.clone() * bj.clone();
            }
        }
    }
    out
}

/// Largest coefficient mismatch of the functional equation
/// M(Z) = R(Z(1 + M(Z))) through degree `len`.
pub fn check_functional_equation<S: RingScalar + ScalarNorm>(
    kappa: &[S],
    len: usize,
) -> Result<f64> {
    let m = moments_from_cumulants(kappa, len)?;
    // w = Z(1 + M(Z)): degree-1 coefficient 1, degree-n coefficient m_{n−1}
    let mut w = vec![S::zero(); len];
    w[0] = S::one();
    for n in 2..=len {
        w[n - 1] = m[n - 2].clone();
    }
    // R(w) = Σ_k κ_k w^k, truncated
    let mut acc = vec![S::zero(); len];
    let mut wpow = w.clone();
    for k in 1..=len {
        if k <= kappa.len() {
            for d in 0..len {
                acc[d] = acc[d].clone() + kappa[k - 1].clone() * wpow[d].clone();
            }
        }
        if k < len {
            wpow = series_mul(&wpow, &w, len);
        }
    }
    let mut worst = 0.0f64;
    for d in 0..len {
        let diff = acc[d].clone() - m[d].clone();
        worst = worst.max(diff.mag());
    }
    Ok(worst)
}

/// C(i₁, …, i_k): non-crossing pairings whose pairs are monochromatic in the
/// given coloring.
pub fn colored_pairing_count(colors: &[usize]) -> Result<u64> {
    if colors.len() > 14 {
        return Err(Error::SizeLimit(format!(
            "colored pairing count supports length ≤ 14, got {}",
            colors.len()
        )));
    }
    if colors.len() % 2 == 1 {
        return Ok(0);
    }
    let mut count = 0u64;
    for p in enumerate_nc_pairings(colors.len())? {
        if p.blocks.iter().all(|b| colors[b[0] - 1] == colors[b[1] - 1]) {
            count += 1;
        }
    }
    Ok(count)
}

/// B(i₁, …, i_k; j): type B pairings, colors matching on |p| ∼ |q|, zero
/// block containing the positive label j.  Equals C(i₁, …, i_k), with the
/// count realized through the explicit lift.
pub fn colored_pairing_count_b(colors: &[usize], j: usize) -> Result<u64> {
    if j == 0 || j > colors.len() {
        return Err(Error::InvalidInput(format!(
            "designated position {j} outside 1..={}",
            colors.len()
        )));
    }
    if colors.len() % 2 == 1 {
        return Ok(0);
    }
    let mut count = 0u64;
    for base in enumerate_nc_pairings(colors.len())? {
        if !base.blocks.iter().all(|b| colors[b[0] - 1] == colors[b[1] - 1]) {
            continue;
        }
        for blk in &base.blocks {
            if blk.contains(&j) {
                let lifted = lift_pairing_b(&base, Some(blk))?;
                let zb = lifted.zero_block.expect("seeded lift has a zero block");
                if zb.contains(&(j as i64)) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Mixed dual moment of two infinitesimally free families, determined by
/// their single-family dual moment sequences.
///
/// Each family's dual cumulants are extracted first; mixed cumulants vanish,
/// so the word moment is the type A sum over non-crossing partitions whose
/// blocks are monochromatic in the word's family coloring, evaluated in dual
/// arithmetic.
pub fn infinitesimal_free_mixed_moment<S: RingScalar>(
    moments_a: &[Dual<S>],
    moments_b: &[Dual<S>],
    word: &[usize],
) -> Result<Dual<S>> {
    let n = word.len();
    if n == 0 {
        return Ok(Dual::constant(S::one()));
    }
    let ka = cumulants_from_moments(moments_a, moments_a.len().min(n).max(1))?;
    let kb = cumulants_from_moments(moments_b, moments_b.len().min(n).max(1))?;
    let mut total = Dual::<S>::zero();
    for part in enumerate_nc(n)? {
        let mut prod = Dual::<S>::one();
        let mut vanish = false;
        for f in &part.blocks {
            let fam = word[f[0] - 1];
            if f.iter().any(|&p| word[p - 1] != fam) {
                vanish = true; // mixed cumulant
                break;
            }
            let seq = if fam == 0 { &ka } else { &kb };
            match seq.get(f.len() - 1) {
                Some(k) => prod = prod * k.clone(),
                None => {
                    vanish = true;
                    break;
                }
            }
        }
        if !vanish {
            total = total + prod;
        }
    }
    Ok(total)
}

/// Type B Bernoulli moment E((a, ξ)ⁿ) = Λ·Aⁿ in dual arithmetic.
pub fn bernoulli_moments_b(lambda: DualComplex, a: DualComplex, n: u32) -> DualComplex {
    lambda * a.pow_u(n)
}

/// Type B free Poisson moments: cumulants κ_n = Λ·Aⁿ pushed through the
/// moment-cumulant sum.
pub fn poisson_moments_b(lambda: DualComplex, a: DualComplex, len: usize) -> Result<Vec<DualComplex>> {
    let kappa: Vec<DualComplex> = (1..=len as u32).map(|n| lambda * a.pow_u(n)).collect();
    moments_from_cumulants(&kappa, len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualnum::Dual;
    use num_bigint::BigInt;
    use num_complex::Complex64;
    use num_rational::BigRational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(p: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(p))
    }

    fn drat(re: i64, inf: i64) -> Dual<BigRational> {
        Dual::new(rat(re), rat(inf))
    }

    // ---- oracle: all set partitions via restricted growth strings ----
    fn all_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut rgs = vec![0usize; n];
        loop {
            let nblocks = rgs.iter().copied().max().unwrap() + 1;
            let mut blocks = vec![Vec::new(); nblocks];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(i + 1);
            }
            out.push(blocks);
            // next restricted growth string
            let mut i = n;
            loop {
                if i == 1 {
                    return out;
                }
                i -= 1;
                let cap = rgs[..i].iter().copied().max().unwrap() + 1;
                if rgs[i] < cap {
                    rgs[i] += 1;
                    for v in rgs[i + 1..].iter_mut() {
                        *v = 0;
                    }
                    break;
                }
            }
        }
    }

    fn crossing_quadruple(blocks: &[Vec<usize>]) -> bool {
        // brute-force a<b<c<d scan over block membership
        let mut owner = std::collections::BTreeMap::new();
        for (bi, b) in blocks.iter().enumerate() {
            for &x in b {
                owner.insert(x, bi);
            }
        }
        let keys: Vec<usize> = owner.keys().copied().collect();
        let n = keys.len();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    for d in (c + 1)..n {
                        let (oa, ob, oc, od) = (
                            owner[&keys[a]],
                            owner[&keys[b]],
                            owner[&keys[c]],
                            owner[&keys[d]],
                        );
                        if oa == oc && ob == od && oa != ob {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn enumeration_matches_filtered_oracle() {
        for n in 1..=7 {
            let mut oracle: Vec<Vec<Vec<usize>>> = all_partitions(n)
                .into_iter()
                .filter(|p| !crossing_quadruple(p))
                .map(|mut p| {
                    p.sort_by_key(|b| b[0]);
                    p
                })
                .collect();
            oracle.sort();
            let mut ours: Vec<Vec<Vec<usize>>> =
                enumerate_nc(n).unwrap().into_iter().map(|p| p.blocks).collect();
            ours.sort();
            assert_eq!(ours, oracle, "mismatch at n = {n}");
            assert_eq!(ours.len() as u64, catalan(n));
        }
    }

    #[test]
    fn enumeration_bounds() {
        assert_eq!(enumerate_nc(1).unwrap().len(), 1);
        assert_eq!(enumerate_nc(3).unwrap().len(), 5);
        assert_eq!(enumerate_nc(4).unwrap().len(), 14);
        assert!(matches!(enumerate_nc(0), Err(Error::SizeLimit(_))));
        assert!(matches!(enumerate_nc(13), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn pairing_enumeration_counts() {
        assert_eq!(enumerate_nc_pairings(2).unwrap().len(), 1);
        assert_eq!(enumerate_nc_pairings(6).unwrap().len(), 5);
        assert!(enumerate_nc_pairings(3).unwrap().is_empty());
        for k in 1..=6 {
            let ps = enumerate_nc_pairings(2 * k).unwrap();
            assert_eq!(ps.len() as u64, catalan(k));
            assert!(ps.iter().all(|p| p.is_pairing()));
        }
    }

    #[test]
    fn lift_examples_from_the_cover() {
        let base = NCPartitionA { n: 2, blocks: vec![vec![1, 2]] };
        let plain = lift_pairing_b(&base, None).unwrap();
        assert_eq!(plain.zero_block, None);
        assert_eq!(plain.pairs, vec![(-1, -2), (1, 2)]);
        assert!(plain.is_valid());

        let seeded = lift_pairing_b(&base, Some(&[1, 2])).unwrap();
        assert_eq!(seeded.zero_block, Some([-2, -1, 1, 2]));
        assert!(seeded.pairs.is_empty());
        assert!(seeded.is_valid());

        let base = NCPartitionA { n: 4, blocks: vec![vec![1, 4], vec![2, 3]] };
        let lifted = lift_pairing_b(&base, Some(&[1, 4])).unwrap();
        assert_eq!(lifted.zero_block, Some([-4, -1, 1, 4]));
        assert!(lifted.pairs.contains(&(2, 3)));
        assert!(lifted.pairs.contains(&(-2, -3)));
        assert!(lifted.is_valid());
        assert_eq!(lifted.abs().blocks, base.blocks);

        // enclosing block gets the mixed lift
        let lifted = lift_pairing_b(&base, Some(&[2, 3])).unwrap();
        assert!(lifted.is_valid());
        assert_eq!(lifted.abs().blocks, base.blocks);

        let bad = lift_pairing_b(&base, Some(&[1, 2]));
        assert!(matches!(bad, Err(Error::InvalidBlock)));
    }

    // ---- oracle: direct enumeration of type B pairings ----
    fn direct_b_pairings(n: usize) -> Vec<NCPairingB> {
        // elements in cut order
        let elems: Vec<i64> = (1..=n as i64).chain((1..=n as i64).map(|x| -x)).collect();
        let mut out = Vec::new();
        // candidate zero blocks: none, or {i, j, −i, −j}
        let mut zero_choices: Vec<Option<[i64; 4]>> = vec![None];
        for i in 1..=n as i64 {
            for j in (i + 1)..=n as i64 {
                let mut z = [i, j, -i, -j];
                z.sort_unstable();
                zero_choices.push(Some(z));
            }
        }
        for zero in zero_choices {
            let mut rest: Vec<i64> = elems
                .iter()
                .copied()
                .filter(|x| zero.map_or(true, |z| !z.contains(x)))
                .collect();
            // enumerate perfect matchings of `rest`
            let mut stack = Vec::new();
            fn matchings(rest: &mut Vec<i64>, cur: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
                if rest.is_empty() {
                    out.push(cur.clone());
                    return;
                }
                let a = rest[0];
                for idx in 1..rest.len() {
                    let b = rest[idx];
                    let mut next: Vec<i64> =
                        rest.iter().copied().filter(|&x| x != a && x != b).collect();
                    cur.push((a, b));
                    matchings(&mut next, cur, out);
                    cur.pop();
                }
            }
            let mut all = Vec::new();
            matchings(&mut rest, &mut stack, &mut all);
            for pairing in all {
                let mut pairs: Vec<(i64, i64)> =
                    pairing.iter().map(|&(a, b)| norm_pair(a, b, n)).collect();
                pairs.sort_unstable();
                let cand = NCPairingB { n, pairs, zero_block: zero };
                if cand.is_valid() {
                    out.push(cand);
                }
                // is_valid also rejects zero-block-free sign-mixed pairings,
                // which the cover never produces
            }
        }
        out.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
        out.dedup();
        out
    }

    #[test]
    fn lift_covers_direct_enumeration() {
        // bases of {1..2n} lift to type B pairings of size 2n on {±1..±2n}
        for n in 1..=3 {
            let mut direct = direct_b_pairings(2 * n);
            let mut lifted = enumerate_b_pairings(n).unwrap();
            assert!(lifted.iter().all(|p| p.is_valid()));
            lifted.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
            let before = lifted.len();
            lifted.dedup();
            assert_eq!(before, lifted.len(), "lift not injective at n = {n}");
            direct.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
            assert_eq!(lifted, direct, "cover misses pairings at n = {n}");
        }
    }

    #[test]
    fn b_pairing_counts() {
        assert_eq!(count_b_pairings(1).unwrap(), (2, 1));
        assert_eq!(count_b_pairings(2).unwrap(), (6, 4));
        assert_eq!(count_b_pairings(3).unwrap(), (20, 15));
        for n in 1..=6 {
            let (total, with_zero) = count_b_pairings(n).unwrap();
            assert_eq!(total, (n as u64 + 1) * catalan(n));
            assert_eq!(with_zero, n as u64 * catalan(n));
        }
    }

    #[test]
    fn semicircle_moments_from_kappa2() {
        // κ₂ = 1 over exact rationals: even moments Catalan, odd zero
        let kappa = vec![rat(0), rat(1)];
        let m = moments_from_cumulants(&kappa, 12).unwrap();
        for k in 1..=6 {
            assert_eq!(m[2 * k - 1], rat(catalan(k) as i64));
            assert_eq!(m[2 * k - 2], rat(0));
        }
    }

    #[test]
    fn type_b_semicircle_dual_moments_exact() {
        // κ₂ = 1 + ħ: m_{2k} = C_k + k·C_k·ħ exactly
        let kappa = vec![Dual::<BigRational>::zero(), drat(1, 1)];
        let m = moments_from_cumulants(&kappa, 12).unwrap();
        for k in 1..=6 {
            let ck = catalan(k) as i64;
            assert_eq!(m[2 * k - 1], drat(ck, k as i64 * ck));
            assert!(m[2 * k - 2].is_zero());
        }
    }

    #[test]
    fn point_mass_moments() {
        // κ₁ = a alone gives m_n = aⁿ
        let a = drat(3, 0);
        let m = moments_from_cumulants(&[a.clone()], 6).unwrap();
        let mut p = Dual::<BigRational>::one();
        for mn in &m {
            p = p * a.clone();
            assert_eq!(*mn, p);
        }
        let k = cumulants_from_moments(&m, 6).unwrap();
        assert_eq!(k[0], a);
        assert!(k[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn moment_cumulant_round_trip_exact() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..10 {
            let kappa: Vec<Dual<BigRational>> = (0..10)
                .map(|_| drat(rng.gen_range(-4..5), rng.gen_range(-4..5)))
                .collect();
            let m = moments_from_cumulants(&kappa, 10).unwrap();
            let back = cumulants_from_moments(&m, 10).unwrap();
            assert_eq!(back, kappa);
        }
    }

    #[test]
    fn semicircle_recovered_from_catalan_moments() {
        let m: Vec<BigRational> = (1..=10)
            .map(|n| if n % 2 == 0 { rat(catalan(n / 2) as i64) } else { rat(0) })
            .collect();
        let k = cumulants_from_moments(&m, 10).unwrap();
        assert_eq!(k[1], rat(1));
        for (i, ki) in k.iter().enumerate() {
            if i != 1 {
                assert!(ki.is_zero());
            }
        }
    }

    #[test]
    fn functional_equation_residuals() {
        // semicircle identity, exact
        let kappa = vec![Dual::<BigRational>::zero(), drat(1, 1)];
        assert_eq!(check_functional_equation(&kappa, 10).unwrap(), 0.0);
        // zero R-transform
        let z = vec![Dual::<Complex64>::zero(); 4];
        assert_eq!(check_functional_equation(&z, 4).unwrap(), 0.0);
        // random dual cumulants in floating point
        // modest cumulants keep degree-8 coefficients O(1), so the float
        // residual stays at roundoff scale
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let kappa: Vec<DualComplex> = (0..8)
                .map(|_| {
                    Dual::new(
                        Complex64::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)),
                        Complex64::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)),
                    )
                })
                .collect();
            assert!(check_functional_equation(&kappa, 8).unwrap() < 1e-12);
        }
    }

    #[test]
    fn colored_counts() {
        assert_eq!(colored_pairing_count(&[1, 1]).unwrap(), 1);
        assert_eq!(colored_pairing_count(&[1, 2, 2, 1]).unwrap(), 1);
        assert_eq!(colored_pairing_count(&[1, 2, 1, 2]).unwrap(), 0);
        assert_eq!(colored_pairing_count(&[1, 1, 1, 1]).unwrap(), 2);
        assert_eq!(colored_pairing_count(&[1, 1, 1]).unwrap(), 0);
    }

    #[test]
    fn colored_b_equals_colored_a() {
        assert_eq!(colored_pairing_count_b(&[1, 1], 1).unwrap(), 1);
        assert_eq!(colored_pairing_count_b(&[1, 2, 1, 2], 2).unwrap(), 0);
        assert_eq!(colored_pairing_count_b(&[1, 1, 2, 2], 3).unwrap(), 1);
        // exhaustive over two-colored words of even length ≤ 8, all j
        for len in [2usize, 4, 6, 8] {
            for mask in 0..(1u32 << len) {
                let colors: Vec<usize> =
                    (0..len).map(|i| ((mask >> i) & 1) as usize + 1).collect();
                let c = colored_pairing_count(&colors).unwrap();
                for j in 1..=len {
                    assert_eq!(colored_pairing_count_b(&colors, j).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn mixed_moments_from_infinitesimal_freeness() {
        // word t₁t₂ → μ(t₁)ν(t₂) + ħ[μ′(t₁)ν(t₂) + μ(t₁)ν′(t₂)]
        let ma = vec![drat(2, 5), drat(4, 20)];
        let mb = vec![drat(3, 7), drat(9, 42)];
        let w = infinitesimal_free_mixed_moment(&ma, &mb, &[0, 1]).unwrap();
        assert_eq!(w, drat(6, 29)); // 2·3, 5·3 + 2·7

        // a family that is a point mass at zero kills its words
        let zero = vec![Dual::<BigRational>::zero(); 4];
        let semi: Vec<Dual<BigRational>> = (1..=4)
            .map(|n| {
                if n % 2 == 0 {
                    drat(catalan(n / 2) as i64, (n as i64 / 2) * catalan(n / 2) as i64)
                } else {
                    Dual::zero()
                }
            })
            .collect();
        let w = infinitesimal_free_mixed_moment(&zero, &semi, &[0, 0]).unwrap();
        assert!(w.is_zero());

        // two type B semicircles: alternating word vanishes (C(1,2,1,2) = 0),
        // the grouped word t₁t₁t₂t₂ carries 1 + 2ħ
        let w = infinitesimal_free_mixed_moment(&semi, &semi, &[0, 1, 0, 1]).unwrap();
        assert!(w.is_zero());
        let w = infinitesimal_free_mixed_moment(&semi, &semi, &[0, 0, 1, 1]).unwrap();
        assert_eq!(w, drat(1, 2));
    }

    #[test]
    fn mixed_moments_reduce_to_type_a() {
        // with zero infinitesimal parts the result has zero infinitesimal part
        let ma: Vec<Dual<BigRational>> =
            vec![drat(1, 0), drat(2, 0), drat(4, 0), drat(9, 0)];
        let mb: Vec<Dual<BigRational>> =
            vec![drat(0, 0), drat(1, 0), drat(1, 0), drat(3, 0)];
        for word in [vec![0, 1], vec![0, 1, 0, 1], vec![1, 0, 0, 1]] {
            let w = infinitesimal_free_mixed_moment(&ma, &mb, &word).unwrap();
            assert!(w.inf.is_zero());
        }
    }

    #[test]
    fn bernoulli_and_poisson() {
        let d = |re: f64, inf: f64| {
            Dual::new(Complex64::new(re, 0.0), Complex64::new(inf, 0.0))
        };
        assert_eq!(bernoulli_moments_b(d(1.0, 0.0), d(1.0, 1.0), 3), d(1.0, 3.0));
        assert_eq!(bernoulli_moments_b(d(0.5, 0.0), d(2.0, 0.0), 4), d(8.0, 0.0));
        assert_eq!(bernoulli_moments_b(d(1.0, 1.0), d(2.0, 0.0), 2), d(4.0, 4.0));

        // free Poisson λ = 1: moments 1, 2, 5, 14
        let m = poisson_moments_b(d(1.0, 0.0), d(1.0, 0.0), 4).unwrap();
        for (i, want) in [1.0, 2.0, 5.0, 14.0].iter().enumerate() {
            assert!((m[i].re - Complex64::new(*want, 0.0)).norm() < 1e-12);
            assert!(m[i].inf.norm() < 1e-12);
        }

        // Λ = 0 kills everything
        let m = poisson_moments_b(Dual::zero(), d(1.0, 1.0), 5).unwrap();
        assert!(m.iter().all(|x| x.is_zero()));

        // Λ = (1,0), A = (1,1): κ₁ = (1,1), κ₂ = (1,2), m₂ = κ₂ + κ₁² = (2,4)
        let m = poisson_moments_b(d(1.0, 0.0), d(1.0, 1.0), 2).unwrap();
        assert_eq!(m[0], d(1.0, 1.0));
        assert_eq!(m[1], d(2.0, 4.0));
    }
}
