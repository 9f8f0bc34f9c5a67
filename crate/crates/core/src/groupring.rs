//! Arithmetic in the group ring of the mapping-torus group
//! `H = ⟨π, z | z⁻¹ g z = f(g)⟩` restricted to `z`-homogeneous elements,
//! norms, and the certified evaluation of `‖L_H(fⁿ)‖`.
//!
//! Every element handled here has the normal form `zⁿ·u` with `u ∈ ℤπ`.
//! Products follow `(zᵐ u)(zⁿ v) = zᵐ⁺ⁿ fⁿ(u) v`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::foxcalc::{chain_matrices, ChainMatrices, RingElem, RingMatrix};
use crate::freegroup::{Endomorphism, Word};
use crate::intmat::IntMatrix;

/// Default length bound for twisted-conjugator search.
pub const DEFAULT_SEARCH_DEPTH: u32 = 8;

/// Cap on words visited per term during conjugator search.
const SEARCH_BUDGET: usize = 250_000;

/// A `z`-homogeneous element `z^degree · body` of `ℤH`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HElem {
    z_degree: u32,
    body: RingElem,
}

impl HElem {
    pub fn new(z_degree: u32, body: RingElem) -> Self {
        HElem { z_degree, body }
    }

    pub fn zero(z_degree: u32) -> Self {
        HElem {
            z_degree,
            body: RingElem::zero(),
        }
    }

    /// Builds from `(z-degree, word, coefficient)` terms. All terms must share
    /// one degree; an empty iterator is rejected since its degree is unknown.
    pub fn from_terms<I: IntoIterator<Item = (u32, Word, BigInt)>>(terms: I) -> Result<Self> {
        let mut degree = None;
        let mut body = RingElem::zero();
        for (d, w, c) in terms {
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::Precondition(alloc::format!(
                        "mixed z-degrees {d0} and {d} in one element"
                    )))
                }
                _ => {}
            }
            body.add_term(w, c);
        }
        let z_degree = degree.ok_or_else(|| Error::Precondition("no terms to infer a z-degree".into()))?;
        Ok(HElem { z_degree, body })
    }

    pub fn z_degree(&self) -> u32 {
        self.z_degree
    }

    pub fn body(&self) -> &RingElem {
        &self.body
    }

    pub fn into_body(self) -> RingElem {
        self.body
    }

    pub fn add(&self, other: &HElem) -> Result<HElem> {
        if self.z_degree != other.z_degree && !self.body.is_zero() && !other.body.is_zero() {
            return Err(Error::Precondition(alloc::format!(
                "cannot add z-degrees {} and {}",
                self.z_degree,
                other.z_degree
            )));
        }
        let z_degree = if self.body.is_zero() {
            other.z_degree
        } else {
            self.z_degree
        };
        Ok(HElem {
            z_degree,
            body: self.body.add(&other.body),
        })
    }

    pub fn norm(&self) -> BigUint {
        self.body.norm()
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.z_degree {
            0 => write!(f, "{}", self.body),
            1 => write!(f, "z ({})", self.body),
            d => write!(f, "z^{d} ({})", self.body),
        }
    }
}

fn check_rank(x: &RingElem, f: &Endomorphism) -> Result<()> {
    let m = x.max_generator();
    if m > f.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: m,
        });
    }
    Ok(())
}

/// `(zᵐ u)(zⁿ v) = zᵐ⁺ⁿ fⁿ(u) v`.
pub fn h_multiply(x: &HElem, y: &HElem, f: &Endomorphism) -> Result<HElem> {
    check_rank(&x.body, f)?;
    check_rank(&y.body, f)?;
    let twisted = x.body.map_endo(&f.iterate(y.z_degree));
    Ok(HElem {
        z_degree: x.z_degree + y.z_degree,
        body: twisted.mul(&y.body),
    })
}

/// A square matrix of `z`-homogeneous elements sharing one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HMatrix {
    z_degree: u32,
    body: RingMatrix,
}

impl HMatrix {
    pub fn new(z_degree: u32, body: RingMatrix) -> Result<Self> {
        if !body.is_square() {
            return Err(Error::DimensionMismatch("H-matrices must be square".into()));
        }
        Ok(HMatrix { z_degree, body })
    }

    /// `z·F` for a chain matrix `F`.
    pub fn z_times(f: &RingMatrix) -> Result<Self> {
        HMatrix::new(1, f.clone())
    }

    pub fn z_degree(&self) -> u32 {
        self.z_degree
    }

    pub fn body(&self) -> &RingMatrix {
        &self.body
    }

    pub fn size(&self) -> usize {
        self.body.rows()
    }

    pub fn norm(&self) -> BigUint {
        self.body.norm()
    }
}

/// Product of two homogeneous matrices: `z^{m+n} f^n_#(M) N`.
pub fn h_matrix_mul(m: &HMatrix, n: &HMatrix, f: &Endomorphism) -> Result<HMatrix> {
    let twisted = m.body.map_endo(&f.iterate(n.z_degree));
    Ok(HMatrix {
        z_degree: m.z_degree + n.z_degree,
        body: twisted.mul(&n.body)?,
    })
}

/// `Mⁿ` for a degree-1 matrix `M`.
pub fn h_matrix_power(m: &HMatrix, n: u32, f: &Endomorphism) -> Result<HMatrix> {
    if m.z_degree != 1 {
        return Err(Error::Precondition("h_matrix_power expects a degree-1 matrix".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("power must be positive".into()));
    }
    if m.body.max_generator() > f.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: m.body.max_generator(),
        });
    }
    // P_{k+1} = P_k · M = z^{k+1} f_#(P_k) M
    let mut p = m.body.clone();
    for _ in 1..n {
        p = p.map_endo(f).mul(&m.body)?;
    }
    Ok(HMatrix { z_degree: n, body: p })
}

pub fn h_trace(m: &HMatrix) -> HElem {
    HElem {
        z_degree: m.z_degree,
        body: m.body.trace(),
    }
}

/// Entrywise norms `A^norm = (‖a_ij‖)`.
pub fn norm_matrix(m: &RingMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(i, j)] = BigInt::from(m.get(i, j).norm());
        }
    }
    out
}

/// `L_H(fⁿ) = Σ_d (−1)^d tr (z F_d)ⁿ`, returned as `zⁿ·u`.
pub fn lefschetz_h(chain: &ChainMatrices, f: &Endomorphism, n: u32) -> Result<HElem> {
    let mut body = RingElem::zero();
    for (d, fd) in chain.iter() {
        let power = h_matrix_power(&HMatrix::z_times(fd)?, n, f)?;
        let tr = h_trace(&power).into_body();
        if d % 2 == 0 {
            body.add_assign(&tr);
        } else {
            body.add_assign(&tr.neg());
        }
    }
    Ok(HElem { z_degree: n, body })
}

/// Canonical label of the image of `zⁿg` in an abelian quotient of `H`.
///
/// With `A` the abelianization of `f` (row convention), the class of `zⁿg`
/// maps to the `A`-orbit of `[g]` in `ℤ^r / ℤ^r (I − Aⁿ)`. Equal classes have
/// equal labels; distinct labels imply distinct classes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitLabel(pub Vec<BigInt>);

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Precomputed data for labelling many words at one `(f, n)`.
#[derive(Clone, Debug)]
pub struct OrbitLabeler {
    rank: usize,
    a_powers: Vec<IntMatrix>,
    smith_v: IntMatrix,
    moduli: Vec<BigInt>,
}

impl OrbitLabeler {
    pub fn new(f: &Endomorphism, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("orbit labels need n >= 1".into()));
        }
        let r = f.rank();
        let a = f.abelianize();
        let mut a_powers = Vec::with_capacity(n as usize);
        let mut p = IntMatrix::identity(r);
        for _ in 0..n {
            a_powers.push(p.clone());
            p = p.mul(&a)?;
        }
        // p = A^n now
        let relations = IntMatrix::identity(r).sub(&p)?;
        let smith = relations.smith();
        Ok(OrbitLabeler {
            rank: r,
            a_powers,
            smith_v: smith.v,
            moduli: smith.diagonal,
        })
    }

    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.smith_v
            .left_apply(v)
            .into_iter()
            .zip(&self.moduli)
            .map(|(x, d)| if d.is_zero() { x } else { x.mod_floor(d) })
            .collect()
    }

    pub fn label(&self, g: &Word) -> OrbitLabel {
        let v: Vec<BigInt> = g.exponent_sums(self.rank).into_iter().map(BigInt::from).collect();
        let best = self
            .a_powers
            .iter()
            .map(|ak| self.reduce(&ak.left_apply(&v)))
            .min()
            .expect("n >= 1");
        OrbitLabel(best)
    }

    /// Invariant factors of `I − Aⁿ`.
    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }
}

pub fn orbit_coordinate(g: &Word, f: &Endomorphism, n: u32) -> Result<OrbitLabel> {
    if g.max_generator() > f.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: g.max_generator(),
        });
    }
    Ok(OrbitLabeler::new(f, n)?.label(g))
}

/// Bracket `lower ≤ ‖L_H(fⁿ)‖ ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormInterval {
    pub lower: BigUint,
    pub upper: BigUint,
    pub certified: bool,
}

impl NormInterval {
    pub fn exact(value: BigUint) -> Self {
        NormInterval {
            lower: value.clone(),
            upper: value,
            certified: true,
        }
    }
}

/// A set of terms of `L_H(fⁿ)` proven to lie in one conjugacy class of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClass {
    pub label: OrbitLabel,
    /// Smallest member in word order.
    pub representative: Word,
    pub members: Vec<Word>,
    /// Sum of the members' coefficients.
    pub index: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReidemeisterInterval {
    pub n: u32,
    /// `L_H(fⁿ)` before grouping into classes.
    pub trace: HElem,
    pub classes: Vec<OrbitClass>,
    /// Groups of class indices that share a label but were not proven equal.
    pub unresolved: Vec<Vec<usize>>,
    pub interval: NormInterval,
    /// Bracket on the number of essential classes.
    pub nielsen_lower: usize,
    pub nielsen_upper: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

/// Bounded search for conjugacies `zⁿg ~ zⁿ fⁿ(γ)⁻¹ g γ` and `zⁿg ~ zⁿ f(g)`.
struct ConjugatorSearch<'a> {
    f: &'a Endomorphism,
    n: u32,
    depth: u32,
    /// `(fⁿ(a_i)⁻¹, fⁿ(a_i))`
    twist: Vec<(Word, Word)>,
}

impl<'a> ConjugatorSearch<'a> {
    fn new(f: &'a Endomorphism, n: u32, depth: u32) -> Self {
        let fnn = f.iterate(n);
        let twist = fnn.images().iter().map(|w| (w.inverse(), w.clone())).collect();
        ConjugatorSearch { f, n, depth, twist }
    }

    /// One step: `h ↦ fⁿ(x)⁻¹ h x` for every letter `x`.
    fn neighbours<'b>(&'b self, h: &'b Word) -> impl Iterator<Item = Word> + 'b {
        self.twist.iter().enumerate().flat_map(move |(i, (inv, img))| {
            let g = Word::generator(i + 1);
            let gi = g.inverse();
            [inv.mul(h).mul(&g), img.mul(h).mul(&gi)]
        })
    }

    /// Unions members of one label group that are reachable from each other.
    fn resolve(&self, members: &[Word], uf: &mut UnionFind, offset: usize) {
        let k = members.len();
        if k < 2 {
            return;
        }
        let mut owner: BTreeMap<Word, usize> = BTreeMap::new();
        let mut components = k;
        for (m, g) in members.iter().enumerate() {
            let mut visited = BTreeSet::new();
            let mut queue = VecDeque::new();
            // the z-conjugates f^j(g), j < n; f^n(g) is already a twisted conjugate
            let mut root = g.clone();
            for _ in 0..self.n {
                if visited.insert(root.clone()) {
                    queue.push_back((root.clone(), 0u32));
                }
                root = self.f.apply_unchecked(&root);
            }
            while let Some((h, dist)) = queue.pop_front() {
                match owner.get(&h) {
                    Some(&o) if o != m => {
                        if uf.union(offset + o, offset + m) {
                            components -= 1;
                            if components == 1 {
                                return;
                            }
                        }
                    }
                    Some(_) => {}
                    None => {
                        owner.insert(h.clone(), m);
                    }
                }
                if dist == self.depth || visited.len() >= SEARCH_BUDGET {
                    continue;
                }
                for next in self.neighbours(&h) {
                    if visited.insert(next.clone()) {
                        queue.push_back((next, dist + 1));
                    }
                }
            }
        }
    }
}

/// Brackets `‖L_H(fⁿ)‖` for the bouquet chain matrices of `f`.
pub fn reidemeister_interval(f: &Endomorphism, n: u32, search_depth: u32) -> Result<ReidemeisterInterval> {
    reidemeister_interval_with_chain(&chain_matrices(f), f, n, search_depth)
}

/// As [`reidemeister_interval`] with caller-supplied chain matrices.
///
/// Terms with different labels lie in different classes. Terms proven
/// conjugate by an explicit conjugator are merged. `upper` is the norm over
/// proven classes, `lower` the norm with every label group merged; the true
/// value lies between them by the triangle inequality.
pub fn reidemeister_interval_with_chain(
    chain: &ChainMatrices,
    f: &Endomorphism,
    n: u32,
    search_depth: u32,
) -> Result<ReidemeisterInterval> {
    if n == 0 {
        return Err(Error::Precondition("iterate n must be >= 1".into()));
    }
    let trace = lefschetz_h(chain, f, n)?;
    let labeler = OrbitLabeler::new(f, n)?;

    let mut groups: BTreeMap<OrbitLabel, Vec<(Word, BigInt)>> = BTreeMap::new();
    for (w, c) in trace.body().terms() {
        groups.entry(labeler.label(w)).or_default().push((w.clone(), c.clone()));
    }

    let search = ConjugatorSearch::new(f, n, search_depth);
    let mut classes = Vec::new();
    let mut unresolved = Vec::new();
    let mut lower = BigUint::zero();
    let mut nielsen_lower = 0;
    for (label, terms) in groups {
        let total: BigInt = terms.iter().map(|(_, c)| c).sum();
        lower += total.magnitude();
        if !total.is_zero() {
            nielsen_lower += 1;
        }
        let words: Vec<Word> = terms.iter().map(|(w, _)| w.clone()).collect();
        let mut uf = UnionFind::new(words.len());
        search.resolve(&words, &mut uf, 0);

        let mut by_root: BTreeMap<usize, (Vec<Word>, BigInt)> = BTreeMap::new();
        for (i, (w, c)) in terms.into_iter().enumerate() {
            let e = by_root.entry(uf.find(i)).or_default();
            e.0.push(w);
            e.1 += c;
        }
        let first = classes.len();
        for (_, (mut members, index)) in by_root {
            members.sort();
            classes.push(OrbitClass {
                label: label.clone(),
                representative: members[0].clone(),
                members,
                index,
            });
        }
        if classes.len() - first > 1 {
            unresolved.push((first..classes.len()).collect());
        }
    }
    let upper: BigUint = classes.iter().map(|c| c.index.magnitude().clone()).sum();
    let nielsen_upper = classes.iter().filter(|c| !c.index.is_zero()).count();
    if lower > upper {
        return Err(Error::Internal("norm interval with lower > upper".into()));
    }
    let certified = lower == upper;
    Ok(ReidemeisterInterval {
        n,
        trace,
        classes,
        unresolved,
        interval: NormInterval {
            lower,
            upper,
            certified,
        },
        nielsen_lower,
        nielsen_upper,
    })
}

impl ReidemeisterInterval {
    /// True when every class carrying a nonzero index is separated.
    pub fn nielsen_certified(&self) -> bool {
        self.nielsen_lower == self.nielsen_upper
    }

    /// Signed sum of all indices: the classical Lefschetz number.
    pub fn lefschetz_number(&self) -> BigInt {
        self.trace.body().augment()
    }

    pub fn essential_classes(&self) -> impl Iterator<Item = &OrbitClass> {
        self.classes.iter().filter(|c| !c.index.is_zero())
    }

    /// Largest absolute index among essential classes.
    pub fn max_index(&self) -> BigInt {
        self.classes.iter().map(|c| c.index.abs()).max().unwrap_or_default()
    }
}
