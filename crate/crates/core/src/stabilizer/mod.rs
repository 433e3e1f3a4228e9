//! Vertex and edge stabilizers in `GL₂(C)`: membership, enumeration and
//! classification over a finite constant field.
//!
//! `G_v` is the preimage in `W = W(v, v)` of `H = U ∩ GL₂(k∞)` under the
//! residue map `h̄`, so `|G_v| = |H| · q^{dim ker h̄}`. Because `h̄(g)` is
//! the reduction of `m⁻¹ g m`, it has the characteristic polynomial of `g`,
//! and eigenvalue questions about `G_v` are settled on `H`.

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::algebra::{eigen_class, EigenClass, Fe, FiniteField, Matrix2};
use crate::backend::{Backend, KElement};
use crate::error::{Error, Result};
use crate::tree::{
    has_unit_determinant, in_standard_subgroup, Edge, IntegralSpace, KMatrix, Vertex,
};

/// Largest `q^{dim}` of a residue subspace whose units are listed.
pub const UNIT_ENUMERATION_LIMIT: u128 = 1 << 20;
/// Largest group whose elements are materialized as matrices over `C`.
pub const ELEMENT_LIMIT: u128 = 1 << 14;

/// Isomorphism type of a stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassLabel {
    /// `Z × N` with `N` unipotent; contains a non-scalar split torus.
    RationalNonAbelian,
    /// `Z × N` with all eigenvalues repeated.
    RationalAbelian,
    /// `F_{q²}*`.
    CM,
    /// `GL₂(F_q)`.
    SplitQuaternionic,
    /// Requires an infinite constant field; never produced.
    NonSplitQuaternionic,
    /// Requires an inseparable extension of an infinite field; never produced.
    Inseparable,
}

impl ClassLabel {
    pub fn is_rational(self) -> bool {
        matches!(self, ClassLabel::RationalNonAbelian | ClassLabel::RationalAbelian)
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::RationalNonAbelian => "RationalNonAbelian",
            ClassLabel::RationalAbelian => "RationalAbelian",
            ClassLabel::CM => "CM",
            ClassLabel::SplitQuaternionic => "SplitQuaternionic",
            ClassLabel::NonSplitQuaternionic => "NonSplitQuaternionic",
            ClassLabel::Inseparable => "Inseparable",
        }
    }
}

/// Which eigenvalue classes occur among the elements of a group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EigenSummary {
    pub distinct: bool,
    pub repeated: bool,
    pub not_in_k: bool,
}

/// A stabilizer `G_v` or `G_e`, realized as the preimage of the units of a
/// subspace `S ⊂ U` of residues.
#[derive(Clone, Debug)]
pub struct StabGroup {
    /// `v(n; ...)` for a vertex, `v(...) -- v(...)` for an edge.
    pub subject: String,
    pub vertex: Vertex,
    pub edge: Option<Edge>,
    pub order: u128,
    pub label: ClassLabel,
    /// `dim V` for the rational labels.
    pub dim_v: Option<u32>,
    /// Set when the label was read off the order alone, without listing
    /// residues.
    pub inferred: bool,
    pub eigen: Option<EigenSummary>,
    space: IntegralSpace,
    /// Basis of `S` in coordinates on the image basis of `space`.
    sub_coords: Vec<Vec<Fe>>,
    /// Basis of `S` as residue matrices.
    sub_basis: Vec<Matrix2<Fe>>,
    /// `S ∩ GL₂(k∞)` with coordinates on `sub_basis`, when listed.
    units: Option<Vec<(Vec<Fe>, Matrix2<Fe>)>>,
    unit_count: u128,
}

/// JSON stabilizer report.
#[derive(Clone, Debug, Serialize)]
pub struct StabReport {
    pub vertex: String,
    pub order: u128,
    pub label: ClassLabel,
    #[serde(rename = "dimV")]
    pub dim_v: Option<u32>,
    pub generators: Vec<String>,
    pub inferred: bool,
}

/// `M ∈ G_v` by the valuation conditions `ν(c) ≥ −n`,
/// `ν(a − zc) ≥ 0`, `ν(d + zc) ≥ 0`, `ν(b + z(a − d) − z²c) ≥ n`.
pub fn membership_by_valuations(bk: &Backend, m: &KMatrix, v: &Vertex) -> Result<bool> {
    if !has_unit_determinant(bk, m) {
        return Err(Error::Domain("stabilizer candidates need determinant in k*".into()));
    }
    let n = v.level();
    let z = v.z(bk);
    let zc = bk.mul(&z, &m.c);
    let b_cond = bk.sub(&bk.add(&m.b, &bk.mul(&z, &bk.sub(&m.a, &m.d))), &bk.mul(&z, &zc));
    Ok(bk.valuation_at_least(&m.c, -n)
        && bk.valuation_at_least(&bk.sub(&m.a, &zc), 0)
        && bk.valuation_at_least(&bk.add(&m.d, &zc), 0)
        && bk.valuation_at_least(&b_cond, n))
}

/// `M ∈ G_v` by the coset test `m⁻¹ M m ∈ Z∞ GL₂(O∞)`.
pub fn membership_by_coset(bk: &Backend, m: &KMatrix, v: &Vertex) -> Result<bool> {
    if !has_unit_determinant(bk, m) {
        return Err(Error::Domain("stabilizer candidates need determinant in k*".into()));
    }
    let h = v.matrix_inverse(bk).mul(m, bk).mul(&v.matrix(bk), bk);
    in_standard_subgroup(bk, &h)
}

/// `M ∈ G_v`, decided by both membership tests; disagreement is a theorem
/// violation.
pub fn is_in_stabilizer(bk: &Backend, m: &KMatrix, v: &Vertex) -> Result<bool> {
    let a = membership_by_valuations(bk, m, v)?;
    let b = membership_by_coset(bk, m, v)?;
    if a != b {
        return Err(Error::violation(
            "stabilizer membership",
            format!("valuation test says {a}, coset test says {b} for {} at {v}", bk.format_matrix(m)),
        ));
    }
    Ok(a)
}

/// The full stabilizer `G_v` with its classification.
pub fn enumerate_stabilizer(bk: &Backend, v: &Vertex) -> Result<StabGroup> {
    let space = IntegralSpace::new(bk, v, v)?;
    let dim = space.image_dim();
    let sub_coords: Vec<Vec<Fe>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }).collect())
        .collect();
    StabGroup::build(bk, v.to_string(), v.clone(), None, space, sub_coords)
}

/// `G_e = G_u ∩ G_w`: the elements of `G_u` whose residue fixes the line of
/// `w` in the star of `u`.
pub fn edge_stabilizer(bk: &Backend, e: &Edge) -> Result<StabGroup> {
    let gu = enumerate_stabilizer(bk, &e.lower)?;
    gu.edge_subgroup(bk, &e.upper)
}

/// `|G_e|` from the joint integrality conditions of both endpoints, a route
/// independent of the star action.
pub fn edge_stabilizer_order_joint(bk: &Backend, e: &Edge) -> Result<u128> {
    let joint = IntegralSpace::joint(
        bk,
        &[(e.lower.clone(), e.lower.clone()), (e.upper.clone(), e.upper.clone())],
    )?;
    joint.transporter_count(bk)
}

/// The star label of a neighbour as a line of `k∞²`: `[u : 1]` or `[1 : 0]`.
pub fn star_line(bk: &Backend, label: usize) -> [Fe; 2] {
    if label == bk.residue_count() {
        [Fe::ONE, Fe::ZERO]
    } else {
        [Fe(label as u8), Fe::ONE]
    }
}

/// The star label of the line spanned by `v`.
pub fn line_label(bk: &Backend, v: [Fe; 2]) -> usize {
    let kinf = bk.residue_field();
    if v[1].is_zero() {
        bk.residue_count()
    } else {
        kinf.div(v[0], v[1]).expect("nonzero").index()
    }
}

/// How a residue matrix moves star labels.
pub fn act_on_label(bk: &Backend, m: &Matrix2<Fe>, label: usize) -> usize {
    let kinf = bk.residue_field();
    let l = star_line(bk, label);
    line_label(
        bk,
        [
            kinf.add(kinf.mul(m.a, l[0]), kinf.mul(m.b, l[1])),
            kinf.add(kinf.mul(m.c, l[0]), kinf.mul(m.d, l[1])),
        ],
    )
}

impl StabGroup {
    fn build(
        bk: &Backend,
        subject: String,
        vertex: Vertex,
        edge: Option<Edge>,
        space: IntegralSpace,
        sub_coords: Vec<Vec<Fe>>,
    ) -> Result<Self> {
        let kinf = bk.residue_field();
        let image = space.image_basis();
        let sub_basis: Vec<Matrix2<Fe>> =
            sub_coords.iter().map(|c| combine(kinf, c, &image)).collect();
        let q = bk.q() as u128;
        let unit_count = crate::tree::count_invertible(bk, &sub_basis)?;
        let order = unit_count * q.pow(space.kernel_dim() as u32);
        let listable = q.checked_pow(sub_basis.len() as u32).is_some_and(|n| n <= UNIT_ENUMERATION_LIMIT);
        let units = listable.then(|| list_units(bk, &sub_basis));
        if let Some(u) = &units {
            if u.len() as u128 != unit_count {
                return Err(Error::violation(
                    "unit count",
                    format!("{} listed units against {unit_count} counted", u.len()),
                ));
            }
        }
        let eigen = match &units {
            Some(u) => Some(eigen_summary(bk, u.iter().map(|x| &x.1))?),
            None => None,
        };
        let (label, dim_v) = classify_order(bk, order, eigen.as_ref())?;
        Ok(StabGroup {
            subject,
            vertex,
            edge,
            order,
            label,
            dim_v,
            inferred: eigen.is_none(),
            eigen,
            space,
            sub_coords,
            sub_basis,
            units,
            unit_count,
        })
    }

    /// The stabilizer of the edge from this vertex to the neighbour `w`.
    pub fn edge_subgroup(&self, bk: &Backend, w: &Vertex) -> Result<StabGroup> {
        let label = self
            .vertex
            .label_of(bk, w)
            .ok_or_else(|| Error::Domain(format!("{w} is not adjacent to {}", self.vertex)))?;
        let image_coords = self.space.line_stabilizer_coords(bk, star_line(bk, label));
        let edge = Edge::new(bk, self.vertex.clone(), w.clone())?;
        let subject = format!("{} -- {}", edge.lower, edge.upper);
        StabGroup::build(bk, subject, self.vertex.clone(), Some(edge), self.space.clone(), image_coords)
    }

    /// `|S ∩ GL₂(k∞)|`, the order of the residue image.
    pub fn residue_order(&self) -> u128 {
        self.unit_count
    }

    /// `dim ker h̄`; the kernel contributes the factor `q^{dim}`.
    pub fn kernel_dim(&self) -> usize {
        self.space.kernel_dim()
    }

    /// The underlying space `W(v, v)`.
    pub fn space(&self) -> &IntegralSpace {
        &self.space
    }

    /// Basis of the residue subspace `S`.
    pub fn residue_basis(&self) -> &[Matrix2<Fe>] {
        &self.sub_basis
    }

    /// The residue image `S ∩ GL₂(k∞)`, when listed.
    pub fn unit_residues(&self) -> Option<Vec<Matrix2<Fe>>> {
        self.units.as_ref().map(|u| u.iter().map(|x| x.1.clone()).collect())
    }

    /// The element of `G` lifting `S`-coordinates `c` and kernel
    /// coordinates `kc`.
    pub fn lift(&self, bk: &Backend, c: &[Fe], kc: &[Fe]) -> KMatrix {
        let k = bk.field();
        let mut ucoords = vec![Fe::ZERO; self.space.image_dim()];
        for (&ci, v) in c.iter().zip(&self.sub_coords) {
            crate::algebra::linalg::axpy(&mut ucoords, ci, v, k);
        }
        let x = self.space.lift_coords(bk, &ucoords, kc);
        self.space.element(bk, &x)
    }

    /// A uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, bk: &Backend, rng: &mut R) -> Result<KMatrix> {
        let kinf = bk.residue_field();
        let q = bk.q();
        let c = loop {
            let c: Vec<Fe> = (0..self.sub_basis.len()).map(|_| Fe(rng.gen_range(0..q) as u8)).collect();
            if !combine(kinf, &c, &self.sub_basis).det(kinf).is_zero() {
                break c;
            }
        };
        let kc: Vec<Fe> = (0..self.kernel_dim()).map(|_| Fe(rng.gen_range(0..q) as u8)).collect();
        Ok(self.lift(bk, &c, &kc))
    }

    /// Every element, when the order is at most [`ELEMENT_LIMIT`].
    pub fn elements(&self, bk: &Backend) -> Option<Vec<KMatrix>> {
        if self.order > ELEMENT_LIMIT {
            return None;
        }
        let units = self.units.as_ref()?;
        let q = bk.q();
        let kdim = self.kernel_dim();
        let mut out = Vec::with_capacity(self.order as usize);
        for (c, _) in units {
            crate::tree::for_each_vector(kdim, q, |kc| {
                out.push(self.lift(bk, c, kc));
                true
            });
        }
        Some(out)
    }

    /// A generating set: lifts of generators of the residue image, then
    /// `I + α x` for `x` in a basis of `ker h̄` and `α` in an `F_p`-basis of
    /// `k`.
    pub fn generators(&self, bk: &Backend) -> Vec<KMatrix> {
        let kinf = bk.residue_field();
        let mut gens = Vec::new();
        let zero_k = vec![Fe::ZERO; self.kernel_dim()];
        match &self.units {
            Some(units) => {
                let mut chosen: Vec<Matrix2<Fe>> = Vec::new();
                let mut reached: HashSet<Matrix2<Fe>> = HashSet::from([Matrix2::identity(kinf)]);
                for (c, m) in units {
                    if reached.len() as u128 == self.unit_count {
                        break;
                    }
                    if reached.contains(m) {
                        continue;
                    }
                    chosen.push(m.clone());
                    reached = closure(kinf, &chosen);
                    gens.push(self.lift(bk, c, &zero_k));
                }
            }
            None => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
                let q = bk.q();
                while gens.len() < 8 {
                    let c: Vec<Fe> = (0..self.sub_basis.len()).map(|_| Fe(rng.gen_range(0..q) as u8)).collect();
                    if !combine(kinf, &c, &self.sub_basis).det(kinf).is_zero() {
                        gens.push(self.lift(bk, &c, &zero_k));
                    }
                }
            }
        }
        let k = bk.field();
        let p = k.characteristic();
        let id = Matrix2::identity(bk);
        let prime_basis: Vec<Fe> = (0..k.ext_degree()).map(|j| Fe(p.pow(j) as u8)).collect();
        for x in self.space.kernel_elements(bk) {
            for &alpha in &prime_basis {
                gens.push(id.add(&x.map(|e| bk.scale(alpha, e)), bk));
            }
        }
        gens
    }

    /// The JSON report.
    pub fn report(&self, bk: &Backend) -> StabReport {
        StabReport {
            vertex: self.subject.clone(),
            order: self.order,
            label: self.label,
            dim_v: self.dim_v,
            generators: self.generators(bk).iter().map(|g| bk.format_matrix(g)).collect(),
            inferred: self.inferred,
        }
    }
}

fn combine(kinf: &FiniteField, c: &[Fe], ms: &[Matrix2<Fe>]) -> Matrix2<Fe> {
    crate::tree::combine_matrices(kinf, c, ms)
}

fn list_units(bk: &Backend, basis: &[Matrix2<Fe>]) -> Vec<(Vec<Fe>, Matrix2<Fe>)> {
    let kinf = bk.residue_field();
    let mut out = Vec::new();
    crate::tree::for_each_vector(basis.len(), bk.q(), |c| {
        let m = combine(kinf, c, basis);
        if !m.det(kinf).is_zero() {
            out.push((c.to_vec(), m));
        }
        true
    });
    out
}

/// The subgroup of `GL₂(k∞)` generated by `gens`.
fn closure(kinf: &FiniteField, gens: &[Matrix2<Fe>]) -> HashSet<Matrix2<Fe>> {
    let id = Matrix2::identity(kinf);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g, kinf);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// A residue trace or determinant as an element of `k`.
fn residue_in_k(bk: &Backend, x: Fe) -> Result<Fe> {
    if x.index() < bk.q() {
        Ok(x)
    } else {
        Err(Error::violation("trace and determinant in k", format!("residue value {x} lies outside k")))
    }
}

/// Eigenvalue class of a residue of a stabilizer element.
pub fn residue_eigen_class(bk: &Backend, m: &Matrix2<Fe>) -> Result<EigenClass> {
    let kinf = bk.residue_field();
    let tr = residue_in_k(bk, m.trace(kinf))?;
    let det = residue_in_k(bk, m.det(kinf))?;
    eigen_class(tr, det, bk.field())
}

fn eigen_summary<'a>(bk: &Backend, ms: impl Iterator<Item = &'a Matrix2<Fe>>) -> Result<EigenSummary> {
    let mut s = EigenSummary::default();
    for m in ms {
        match residue_eigen_class(bk, m)? {
            EigenClass::DistinctInK => s.distinct = true,
            EigenClass::RepeatedInK => s.repeated = true,
            EigenClass::NotInK => s.not_in_k = true,
        }
    }
    Ok(s)
}

/// `n` with `q^n = x`, if any.
fn log_q(x: u128, q: u128) -> Option<u32> {
    let mut n = 0;
    let mut acc = 1u128;
    while acc < x {
        acc *= q;
        n += 1;
    }
    (acc == x).then_some(n)
}

/// The label and `dim V` forced by the order and, when known, the
/// eigenvalue classes present. An order outside every class is a theorem
/// violation.
pub fn classify_order(bk: &Backend, order: u128, eigen: Option<&EigenSummary>) -> Result<(ClassLabel, Option<u32>)> {
    let q = bk.q() as u128;
    let cm = q * q - 1;
    let split = (q * q - 1) * (q * q - q);
    let non_abelian = (order % ((q - 1) * (q - 1)) == 0).then(|| log_q(order / ((q - 1) * (q - 1)), q)).flatten();
    let abelian = (order % (q - 1) == 0).then(|| log_q(order / (q - 1), q)).flatten();
    let violation = |what: &str| {
        Err(Error::violation("stabilizer order formula", format!("{what} stabilizer of order {order} over F_{q}")))
    };
    match eigen {
        Some(e) if e.not_in_k => {
            if order == cm {
                Ok((ClassLabel::CM, None))
            } else if order == split {
                Ok((ClassLabel::SplitQuaternionic, None))
            } else {
                violation("non-rational")
            }
        }
        Some(e) if e.distinct => match non_abelian {
            Some(n) => Ok((ClassLabel::RationalNonAbelian, Some(n))),
            None => violation("rational non-abelian"),
        },
        Some(_) => match abelian {
            Some(n) => Ok((ClassLabel::RationalAbelian, Some(n))),
            None => violation("rational abelian"),
        },
        None => {
            if order == split {
                Ok((ClassLabel::SplitQuaternionic, None))
            } else if order == cm {
                Ok((ClassLabel::CM, None))
            } else if let (Some(n), true) = (non_abelian, q > 2) {
                Ok((ClassLabel::RationalNonAbelian, Some(n)))
            } else if let (Some(n), true) = (abelian, q > 2) {
                Ok((ClassLabel::RationalAbelian, Some(n)))
            } else {
                violation("unlisted")
            }
        }
    }
}

/// The classification of a stabilizer, recomputed from its order and
/// eigenvalue data.
pub fn classify(bk: &Backend, s: &StabGroup) -> Result<(ClassLabel, Option<u32>)> {
    classify_order(bk, s.order, s.eigen.as_ref())
}

/// `I(M) = {αI + βM : α, β ∈ k, det ∈ k*}`, each member checked to lie in
/// `G_v`.
pub fn span_i(bk: &Backend, m: &KMatrix, v: &Vertex) -> Result<Vec<KMatrix>> {
    if !is_in_stabilizer(bk, m, v)? {
        return Err(Error::Domain(format!("{} does not stabilize {v}", bk.format_matrix(m))));
    }
    let k = bk.field();
    let mut out = Vec::new();
    for alpha in k.elements() {
        for beta in k.elements() {
            let x = Matrix2::scalar(KElement::constant(alpha), bk).add(&m.map(|e| bk.scale(beta, e)), bk);
            if !has_unit_determinant(bk, &x) {
                continue;
            }
            if !is_in_stabilizer(bk, &x, v)? {
                return Err(Error::violation("closure of I(M)", format!("{} left G_v", bk.format_matrix(&x))));
            }
            out.push(x);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `|I(M)|` predicted by the eigenvalue class of a non-scalar `M`.
pub fn span_i_expected_size(class: EigenClass, q: usize) -> usize {
    match class {
        EigenClass::NotInK => q * q - 1,
        EigenClass::DistinctInK => (q - 1) * (q - 1),
        EigenClass::RepeatedInK => q * (q - 1),
    }
}

#[cfg(test)]
mod tests;
