//! Dimension formulas for `so(m)` and `gl(k)` representations, the spinor tensor rule and
//! Pieri's rule for exterior powers, plus graded-dimension identities checked against kernels.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::clifford::Chirality;
use crate::error::{FischerError, Result};
use crate::exactla::chart::ValueKind;
use crate::poly::{binomial, multidegrees, GradedSlice};
use crate::spaces::{is_partition, Workspace};

/// An integer or half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub const HALF: HalfInt = HalfInt(1);

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    fn to_big(self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::from(2))
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn ints(v: &[i64]) -> Vec<HalfInt> {
    v.iter().map(|&x| HalfInt::int(x)).collect()
}

fn render(w: &[HalfInt]) -> String {
    format!(
        "({})",
        w.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// Checks `so(m)` dominance: `λ_1 ≥ … ≥ λ_n ≥ 0` for odd `m`, `λ_1 ≥ … ≥ λ_{n−1} ≥ |λ_n|` for
/// even `m`, all entries of one integrality class.
pub fn check_dominant_so(m: usize, lambda: &[HalfInt]) -> Result<()> {
    let n = m / 2;
    let bad = || FischerError::NotDominant(format!("{} for so({m})", render(lambda)));
    if lambda.len() != n || n == 0 {
        return Err(bad());
    }
    if lambda
        .iter()
        .any(|x| x.is_integer() != lambda[0].is_integer())
    {
        return Err(bad());
    }
    if lambda
        .windows(2)
        .take(n.saturating_sub(2))
        .any(|w| w[0] < w[1])
    {
        return Err(bad());
    }
    if m % 2 == 1 {
        if (n >= 2 && lambda[n - 2] < lambda[n - 1]) || lambda[n - 1] < HalfInt(0) {
            return Err(bad());
        }
    } else if n >= 2 && lambda[n - 2] < lambda[n - 1].abs() {
        return Err(bad());
    }
    Ok(())
}

fn to_u128(r: &BigRational) -> u128 {
    assert!(
        r.is_integer() && !r.is_negative(),
        "dimension formula produced {r}"
    );
    r.to_integer().to_u128().expect("dimension fits in u128")
}

/// Weyl dimension of the irreducible `so(m)` representation with highest weight `λ`.
pub fn weyl_dim_so(m: usize, lambda: &[HalfInt]) -> Result<u128> {
    check_dominant_so(m, lambda)?;
    let n = m / 2;
    let odd = m % 2 == 1;
    let rho: Vec<BigRational> = (1..=n)
        .map(|i| {
            let base = BigRational::from_integer(BigInt::from((n - i) as i64));
            if odd {
                base + BigRational::new(BigInt::one(), BigInt::from(2))
            } else {
                base
            }
        })
        .collect();
    let l: Vec<BigRational> = lambda
        .iter()
        .zip(&rho)
        .map(|(x, r)| x.to_big() + r)
        .collect();
    let mut num = BigRational::one();
    let mut den = BigRational::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= (&l[i] - &l[j]) * (&l[i] + &l[j]);
            den *= (&rho[i] - &rho[j]) * (&rho[i] + &rho[j]);
        }
        if odd {
            num *= &l[i];
            den *= &rho[i];
        }
    }
    Ok(to_u128(&(num / den)))
}

/// Weyl dimension of the `gl(k)` representation `F_λ`. A uniform rational shift of all
/// entries does not change the result.
pub fn gl_dim(lambda: &[BigRational]) -> Result<u128> {
    let k = lambda.len();
    for w in lambda.windows(2) {
        let d = &w[0] - &w[1];
        if !d.is_integer() || d.is_negative() {
            let shown: Vec<String> = lambda.iter().map(ToString::to_string).collect();
            return Err(FischerError::NotDominant(format!(
                "({}) for gl({k})",
                shown.join(",")
            )));
        }
    }
    let mut acc = BigRational::one();
    for i in 0..k {
        for j in i + 1..k {
            let gap = BigRational::from_integer(BigInt::from((j - i) as i64));
            acc *= (&lambda[i] - &lambda[j] + &gap) / gap;
        }
    }
    Ok(to_u128(&acc))
}

/// [`gl_dim`] for integer weights.
pub fn gl_dim_int(lambda: &[i64]) -> Result<u128> {
    gl_dim(
        &lambda
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect::<Vec<_>>(),
    )
}

/// One summand of `E_λ ⊗ S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinorSummand {
    pub weight: Vec<HalfInt>,
    /// Half-spinor the shifting weight came from (even `m` only).
    pub chirality: Option<Chirality>,
    pub dim: u128,
}

/// The weights `Π(S) = (±½, …, ±½)` with the chirality of each (even number of `−½` is `Plus`).
pub fn spinor_weights(m: usize) -> Vec<(Vec<HalfInt>, Option<Chirality>)> {
    let n = m / 2;
    (0..1usize << n)
        .map(|s| {
            let w: Vec<HalfInt> = (0..n)
                .map(|j| {
                    if s & (1 << j) != 0 {
                        -HalfInt::HALF
                    } else {
                        HalfInt::HALF
                    }
                })
                .collect();
            let chir = m.is_multiple_of(2).then(|| {
                if s.count_ones() % 2 == 0 {
                    Chirality::Plus
                } else {
                    Chirality::Minus
                }
            });
            (w, chir)
        })
        .collect()
}

/// `E_λ ⊗ S` by the minuscule tensor rule: every dominant `λ + α`, `α ∈ Π(S)`, once.
pub fn klimyk_spinor_tensor(m: usize, lambda: &[HalfInt]) -> Result<Vec<SpinorSummand>> {
    check_dominant_so(m, lambda)?;
    if lambda.iter().any(|x| !x.is_integer()) {
        return Err(FischerError::NotDominant(format!(
            "{} is not integral",
            render(lambda)
        )));
    }
    let mut out = Vec::new();
    for (alpha, chirality) in spinor_weights(m) {
        let nu: Vec<HalfInt> = lambda.iter().zip(&alpha).map(|(&a, &b)| a + b).collect();
        if check_dominant_so(m, &nu).is_ok() {
            let dim = weyl_dim_so(m, &nu)?;
            out.push(SpinorSummand {
                weight: nu,
                chirality,
                dim,
            });
        }
    }
    out.sort_by(|a, b| b.weight.cmp(&a.weight));
    Ok(out)
}

/// Subsets of `{1..k}` of size `j`, lexicographic.
pub fn subsets_of_size(k: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for x in start..=k {
            cur.push(x);
            rec(x + 1, k, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, k, j, &mut Vec::new(), &mut out);
    out
}

/// `∧^j(C^k) ⊗ F_a = ⊕_{|J| = j} F_{a+ε(J)}`, keeping the partitions.
pub fn pieri_wedge(k: usize, j: usize, a: &[u32]) -> Result<Vec<Vec<u32>>> {
    if a.len() != k || !is_partition(a) {
        return Err(FischerError::NotPartition(format!("{a:?}")));
    }
    if j > k {
        return Err(FischerError::IndexOutOfRange { index: j, bound: k });
    }
    Ok(subsets_of_size(k, j)
        .into_iter()
        .map(|set| {
            let mut b = a.to_vec();
            for i in set {
                b[i - 1] += 1;
            }
            b
        })
        .filter(|b| is_partition(b))
        .collect())
}

/// Partitions `a_1 ≥ … ≥ a_k ≥ 0` with `a_1 ≤ max_part`.
pub fn partitions_bounded(k: usize, max_part: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in (0..=bound).rev() {
            cur.push(x);
            rec(k, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, max_part, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `total` into at most `k` parts, padded to length `k`.
pub fn partitions_of(total: u32, k: usize) -> Vec<Vec<u32>> {
    multidegrees(k, total)
        .into_iter()
        .filter(|a| is_partition(a))
        .collect()
}

fn padded(m: usize, a: &[u32], fill: HalfInt, plus: HalfInt) -> Result<Vec<HalfInt>> {
    let n = m / 2;
    if a.len() > n {
        return Err(FischerError::Unsupported(format!(
            "{} parts exceed rank {n} of so({m})",
            a.len()
        )));
    }
    let mut w: Vec<HalfInt> = a.iter().map(|&x| HalfInt::int(x as i64) + plus).collect();
    w.resize(n, fill);
    Ok(w)
}

/// Highest weights of the simplicial monogenics `M^S_a`: `a′ = (a_1+½, …, a_k+½, ½, …, ½)`,
/// and for even `m` the pair `a′_±` differing in the sign of the last entry.
pub fn monogenic_weights(m: usize, a: &[u32]) -> Result<Vec<Vec<HalfInt>>> {
    let w = padded(m, a, HalfInt::HALF, HalfInt::HALF)?;
    if m % 2 == 1 {
        return Ok(vec![w]);
    }
    let mut minus = w.clone();
    let last = minus.len() - 1;
    minus[last] = -minus[last];
    Ok(vec![w, minus])
}

/// `dim M^S_a` from the Weyl formula (sum over both half-spinor parts for even `m`).
pub fn sdim(m: usize, a: &[u32]) -> Result<u128> {
    if !is_partition(a) {
        return Ok(0);
    }
    monogenic_weights(m, a)?
        .iter()
        .map(|w| weyl_dim_so(m, w))
        .sum()
}

/// Highest weights of `H^S_a` as `so(m)` representations: `a` padded with zeros, and for
/// `m = 2k` with `a_k > 0` also the weight with the last entry negated (the `O(m)`-irreducible
/// space splits into two `SO(m)` pieces there).
pub fn harmonic_weights(m: usize, a: &[u32]) -> Result<Vec<Vec<HalfInt>>> {
    let w = padded(m, a, HalfInt(0), HalfInt(0))?;
    let last = w.len() - 1;
    if m.is_multiple_of(2) && w[last] != HalfInt(0) {
        let mut minus = w.clone();
        minus[last] = -minus[last];
        return Ok(vec![w, minus]);
    }
    Ok(vec![w])
}

/// `dim H^S_a` from the Weyl formula.
pub fn hdim(m: usize, a: &[u32]) -> Result<u128> {
    if !is_partition(a) {
        return Ok(0);
    }
    harmonic_weights(m, a)?
        .iter()
        .map(|w| weyl_dim_so(m, w))
        .sum()
}

/// One exact equality between two dimension counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &str, lhs: u128, rhs: u128) -> Self {
        IdentityCheck {
            name: name.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs == rhs,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedDimReport {
    pub m: usize,
    pub k: usize,
    pub degree: u32,
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

/// Checks, at total degree `ℓ`, with kernel dimensions computed exactly:
/// (a) `dim M_ℓ = Σ_{|a|=ℓ} sdim(a)·dim F_a`;
/// (b) `dim(H_ℓ⊗S) = Σ_J dim M_{ℓ−|J|}`;
/// (c) `dim(P_ℓ⊗S) = Σ dim M_t` over the summands `(J, n, t)` of degree `ℓ`;
/// (d) `dim H_ℓ = Σ_{|a|=ℓ} dim H^S_a·dim F_a` (scalar).
pub fn graded_dim_identities(
    ws: &Workspace,
    l: u32,
    allow_unstable: bool,
) -> Result<GradedDimReport> {
    let (m, k) = (ws.m(), ws.k());
    if !ws.in_stable_range() && !allow_unstable {
        return Err(FischerError::OutsideStableRange { m, k });
    }
    let dim_m =
        |t: u32| -> Result<u128> { Ok(ws.monogenic_space(GradedSlice::Total(t))?.dim() as u128) };
    let parts = partitions_of(l, k);
    let gl = |a: &[u32]| gl_dim_int(&a.iter().map(|&x| x as i64).collect::<Vec<_>>());

    let mut checks = Vec::new();
    let mut rhs_a = 0;
    let mut rhs_d = 0;
    for a in &parts {
        rhs_a += sdim(m, a)? * gl(a)?;
        rhs_d += hdim(m, a)? * gl(a)?;
    }
    checks.push(IdentityCheck::new(
        "monogenic isotypic dimensions",
        dim_m(l)?,
        rhs_a,
    ));

    let h_spinor = ws
        .harmonic_space(GradedSlice::Total(l), ValueKind::Spinor)?
        .dim() as u128;
    let mut rhs_b = 0;
    for j in 0..=k.min(l as usize) {
        rhs_b += binomial(k as u64, j as u64) * dim_m(l - j as u32)?;
    }
    checks.push(IdentityCheck::new(
        "spinor harmonics from monogenics",
        h_spinor,
        rhs_b,
    ));

    let ambient =
        binomial((l as usize + m * k - 1) as u64, (m * k - 1) as u64) * ws.frame().dim() as u128;
    let mut rhs_c = 0;
    for s in crate::decomp::enumerate_summands(k, l) {
        rhs_c += dim_m(s.t)?;
    }
    checks.push(IdentityCheck::new(
        "monogenic Fischer decomposition count",
        ambient,
        rhs_c,
    ));

    let h_scalar = ws
        .harmonic_space(GradedSlice::Total(l), ValueKind::Scalar)?
        .dim() as u128;
    checks.push(IdentityCheck::new(
        "scalar harmonic isotypic dimensions",
        h_scalar,
        rhs_d,
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(GradedDimReport {
        m,
        k,
        degree: l,
        checks,
        pass,
    })
}

/// `dim H^S_a · 2^n = Σ_J sdim(a − ε(J))`, dropping non-partitions.
pub fn harmonic_spinor_identity(m: usize, a: &[u32]) -> Result<IdentityCheck> {
    let k = a.len();
    let n = m / 2;
    let lhs = hdim(m, a)? * (1u128 << n);
    let mut rhs = 0;
    for j in 0..=k {
        for set in subsets_of_size(k, j) {
            let mut b: Vec<i64> = a.iter().map(|&x| x as i64).collect();
            for i in set {
                b[i - 1] -= 1;
            }
            if b.iter().all(|&x| x >= 0) {
                let b: Vec<u32> = b.iter().map(|&x| x as u32).collect();
                rhs += sdim(m, &b)?;
            }
        }
    }
    Ok(IdentityCheck::new(&format!("H^S_{a:?} ⊗ S"), lhs, rhs))
}
