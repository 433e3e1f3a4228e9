//! The quotient graph `G\𝒯` within a radius: star orbits, valencies,
//! isolated vertices, rays, the cycle rank `ω` and the free-product report.

mod export;
pub mod takahashi;

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Matrix2;
use crate::backend::{Backend, BackendSummary};
use crate::error::{Error, Result};
use crate::stabilizer::{act_on_label, enumerate_stabilizer, star_line, ClassLabel, StabGroup};
use crate::tree::{combine_matrices, count_invertible, transporter, Vertex};

/// One `G_v`-orbit on `star(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarOrbit {
    /// Star labels in increasing order.
    pub labels: Vec<usize>,
    /// `|G_e|` for any edge `e` of the orbit.
    pub edge_order: u128,
}

impl StarOrbit {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// The neighbour at the least label.
    pub fn representative(&self, bk: &Backend, v: &Vertex) -> Vertex {
        v.neighbor(bk, self.labels[0])
    }
}

/// `|Stab_H(ℓ)|` for the residue image `H` of a vertex stabilizer and the
/// line of star label `label`.
fn line_stabilizer_residue_order(bk: &Backend, s: &StabGroup, label: usize) -> Result<u128> {
    let space = s.space();
    let coords = space.line_stabilizer_coords(bk, star_line(bk, label));
    let image = space.image_basis();
    let basis: Vec<Matrix2<_>> = coords.iter().map(|c| combine_matrices(bk.residue_field(), c, &image)).collect();
    count_invertible(bk, &basis)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The `G_v`-orbits on the `q^δ + 1` neighbours of `v`, from the residue
/// action on `P¹(k∞)`. Each orbit is certified against
/// `|H| / |Stab_H(ℓ)|`.
pub fn star_orbits(bk: &Backend, s: &StabGroup) -> Result<Vec<StarOrbit>> {
    assert!(s.edge.is_none(), "star orbits need a vertex stabilizer");
    let r = bk.residue_count();
    let labels = r + 1;
    let hs = s.residue_order();
    let kfactor = (bk.q() as u128).pow(s.kernel_dim() as u32);
    let mut stab_orders = Vec::with_capacity(labels);
    for l in 0..labels {
        stab_orders.push(line_stabilizer_residue_order(bk, s, l)?);
    }
    let mut uf = UnionFind((0..labels).collect());
    let expected_ok = |uf: &mut UnionFind| -> bool {
        let mut sizes: HashMap<usize, u128> = HashMap::new();
        for l in 0..labels {
            *sizes.entry(uf.find(l)).or_default() += 1;
        }
        (0..labels).all(|l| {
            let root = uf.find(l);
            sizes[&root] * stab_orders[l] == hs
        })
    };
    match s.unit_residues() {
        Some(units) => {
            for m in &units {
                for l in 0..labels {
                    uf.union(l, act_on_label(bk, m, l));
                }
            }
            if !expected_ok(&mut uf) {
                return Err(Error::violation(
                    "orbit-stabilizer",
                    format!("star orbits of {} disagree with |G_v : G_e|", s.vertex),
                ));
            }
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            let mut rounds = 0;
            while !expected_ok(&mut uf) {
                rounds += 1;
                if rounds > 256 {
                    return Err(Error::Unresolved(format!(
                        "star orbits of {} not certified after sampling",
                        s.vertex
                    )));
                }
                for _ in 0..8 {
                    if let Some(u) = s.space().random_unit_residue(bk, &mut rng) {
                        for l in 0..labels {
                            uf.union(l, act_on_label(bk, &u.residue, l));
                        }
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for l in 0..labels {
        let root = uf.find(l);
        groups.entry(root).or_default().push(l);
    }
    let mut orbits: Vec<StarOrbit> = groups
        .into_values()
        .map(|labels| StarOrbit { edge_order: stab_orders[labels[0]] * kfactor, labels })
        .collect();
    orbits.sort_by_key(|o| o.labels[0]);
    Ok(orbits)
}

/// `val(ṽ)` with one neighbour per orbit as witnesses.
pub fn valency(bk: &Backend, v: &Vertex) -> Result<(usize, Vec<Vertex>)> {
    let s = enumerate_stabilizer(bk, v)?;
    let orbits = star_orbits(bk, &s)?;
    check_valency(bk, &s, orbits.len())?;
    Ok((orbits.len(), orbits.iter().map(|o| o.representative(bk, v)).collect()))
}

/// Whether `ṽ` is isolated; the valency is checked against the criterion
/// `δ = 1` and `F_{q²}* ↪ G_v`.
pub fn is_isolated(bk: &Backend, v: &Vertex) -> Result<bool> {
    Ok(valency(bk, v)?.0 == 1)
}

/// Whether `G_v` contains an element with no eigenvalue in `k`.
fn has_irreducible_element(s: &StabGroup) -> bool {
    match &s.eigen {
        Some(e) => e.not_in_k,
        None => !s.label.is_rational(),
    }
}

/// The valency laws: rational stabilizers give valency at least 2; for
/// `δ = 1` rational non-abelian gives 2 or 3, rational abelian gives 2 or
/// `q + 1`; and valency 1 holds exactly when `δ = 1` and `G_v` contains an
/// element with irreducible characteristic polynomial.
pub fn check_valency(bk: &Backend, s: &StabGroup, val: usize) -> Result<()> {
    let q = bk.q();
    let fail = |law: &'static str| {
        Err(Error::violation(law, format!("{} ({}, order {}) has valency {val}", s.vertex, s.label.name(), s.order)))
    };
    let isolated_expected = bk.delta() == 1 && has_irreducible_element(s);
    if (val == 1) != isolated_expected {
        return fail("isolated vertex criterion");
    }
    if s.label.is_rational() && val < 2 {
        return fail("rational valency bound");
    }
    if bk.delta() == 1 {
        let ok = match s.label {
            ClassLabel::RationalNonAbelian => val == 2 || val == 3,
            ClassLabel::RationalAbelian => val == 2 || val == q + 1,
            _ => val == 1,
        };
        if !ok {
            return fail("valency by stabilizer type");
        }
        if ![1, 2, 3, q + 1].contains(&val) {
            return fail("valency set");
        }
    }
    Ok(())
}

/// A vertex of the quotient graph.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientVertex {
    pub index: usize,
    pub rep: Vertex,
    /// BFS distance from the image of `v(0, 0)`.
    pub depth: usize,
    pub order: u128,
    pub label: ClassLabel,
    #[serde(rename = "dimV")]
    pub dim_v: Option<u32>,
    pub inferred: bool,
    pub valency: usize,
    pub isolated: bool,
    /// Whether `G_v` contains an element with irreducible characteristic
    /// polynomial.
    pub irreducible_element: bool,
    pub orbit_sizes: Vec<usize>,
    /// `|G_e|` for each star orbit, aligned with `orbit_sizes`.
    pub orbit_edge_orders: Vec<u128>,
    /// Set on vertices at the radius, whose stars are not expanded.
    pub boundary: bool,
    pub ray_id: Option<usize>,
}

/// An edge of the quotient graph.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientEdge {
    pub source: usize,
    pub target: usize,
    pub edge_order: u128,
    /// Whether the edge is in the BFS spanning tree.
    pub tree: bool,
}

/// A ray tail, listed from its vertex in `X` outward.
#[derive(Clone, Debug, Serialize)]
pub struct Ray {
    pub id: usize,
    pub vertices: Vec<usize>,
}

/// `G\𝒯` within a radius.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientGraph {
    pub backend: BackendSummary,
    pub radius: usize,
    pub vertices: Vec<QuotientVertex>,
    pub edges: Vec<QuotientEdge>,
    pub maximal_tree: Vec<usize>,
    pub omega: usize,
    pub rays: Vec<Ray>,
    /// Vertices outside the open ray tails.
    pub x: Vec<usize>,
    pub class_number: u64,
    /// Unresolved states; empty for a complete quotient.
    pub unresolved: Vec<String>,
}

struct Working {
    stab: StabGroup,
    orbits: Vec<StarOrbit>,
    consumed: Vec<bool>,
    depth: usize,
}

/// Builds the quotient by breadth-first search from `v(0, 0)`. Each star
/// orbit yields one quotient edge; the far endpoint is matched against
/// known vertices of equal parity, order and label by a transporter, and the
/// matching orbit at the far end is consumed so that every edge is recorded
/// once.
pub fn bfs_quotient(bk: &Backend, radius: usize) -> Result<QuotientGraph> {
    if radius < 1 {
        return Err(Error::Config("radius must be at least 1".into()));
    }
    let mut work: Vec<Working> = Vec::new();
    let mut edges: Vec<QuotientEdge> = Vec::new();
    let mut by_invariant: HashMap<(i64, u128, ClassLabel), Vec<usize>> = HashMap::new();

    let new_vertex = |stab: StabGroup, depth: usize, work: &mut Vec<Working>, by_inv: &mut HashMap<_, Vec<usize>>| -> Result<usize> {
        let v = stab.vertex.clone();
        let orbits = star_orbits(bk, &stab)?;
        check_valency(bk, &stab, orbits.len())?;
        check_edge_laws(bk, &stab, &orbits)?;
        let idx = work.len();
        by_inv.entry((v.parity(), stab.order, stab.label)).or_default().push(idx);
        work.push(Working { consumed: vec![false; orbits.len()], stab, orbits, depth });
        Ok(idx)
    };

    new_vertex(enumerate_stabilizer(bk, &Vertex::origin())?, 0, &mut work, &mut by_invariant)?;
    let mut head = 0;
    while head < work.len() {
        let i = head;
        head += 1;
        if work[i].depth >= radius {
            continue;
        }
        for o in 0..work[i].orbits.len() {
            if work[i].consumed[o] {
                continue;
            }
            work[i].consumed[o] = true;
            let rep_i = work[i].stab.vertex.clone();
            let w = work[i].orbits[o].representative(bk, &rep_i);
            let edge_order = work[i].orbits[o].edge_order;
            let w_stab = enumerate_stabilizer(bk, &w)?;
            let key = (w.parity(), w_stab.order, w_stab.label);
            let mut target = None;
            for &j in by_invariant.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
                let rep_j = &work[j].stab.vertex;
                let sp = transporter(bk, &w, rep_j)?;
                if let Some(g) = sp.find_unit(bk) {
                    target = Some((j, g));
                    break;
                }
            }
            let (j, tree) = match target {
                Some((j, g)) => {
                    // the edge (rep_i, w) is carried to (g·rep_i, rep_j)
                    let moved = rep_i.apply(bk, &g)?;
                    let rep_j = work[j].stab.vertex.clone();
                    let label = rep_j.label_of(bk, &moved).ok_or_else(|| {
                        Error::violation("transporter", format!("{moved} is not adjacent to {rep_j}"))
                    })?;
                    consume(&mut work[j], label, &rep_j)?;
                    (j, false)
                }
                None => {
                    let depth = work[i].depth + 1;
                    let j = new_vertex(w_stab, depth, &mut work, &mut by_invariant)?;
                    let label = w.label_of(bk, &rep_i).expect("adjacent");
                    consume(&mut work[j], label, &w)?;
                    (j, true)
                }
            };
            edges.push(QuotientEdge { source: i, target: j, edge_order, tree });
        }
    }

    let vertices: Vec<QuotientVertex> = work
        .iter()
        .enumerate()
        .map(|(index, w)| QuotientVertex {
            index,
            rep: w.stab.vertex.clone(),
            depth: w.depth,
            order: w.stab.order,
            label: w.stab.label,
            dim_v: w.stab.dim_v,
            inferred: w.stab.inferred,
            valency: w.orbits.len(),
            isolated: w.orbits.len() == 1,
            irreducible_element: has_irreducible_element(&w.stab),
            orbit_sizes: w.orbits.iter().map(StarOrbit::size).collect(),
            orbit_edge_orders: w.orbits.iter().map(|o| o.edge_order).collect(),
            boundary: w.depth >= radius,
            ray_id: None,
        })
        .collect();
    let maximal_tree: Vec<usize> = edges.iter().enumerate().filter(|(_, e)| e.tree).map(|(i, _)| i).collect();
    let omega = edges.len() - maximal_tree.len();
    let mut q = QuotientGraph {
        backend: bk.summary(),
        radius,
        x: Vec::new(),
        vertices,
        edges,
        maximal_tree,
        omega,
        rays: Vec::new(),
        class_number: bk.class_number(),
        unresolved: Vec::new(),
    };
    detect_rays(bk, &mut q);
    Ok(q)
}

fn consume(w: &mut Working, label: usize, at: &Vertex) -> Result<()> {
    let o = w
        .orbits
        .iter()
        .position(|o| o.labels.contains(&label))
        .expect("orbits partition the star");
    if w.consumed[o] {
        return Err(Error::violation("edge pairing", format!("star orbit {o} of {at} matched twice")));
    }
    w.consumed[o] = true;
    Ok(())
}

/// Edge laws on a star: for odd `δ` no `|G_e|` is divisible by `q² − 1`;
/// for even `δ` a vertex with `G_v ≅ GL₂(F_q)` has an incident edge with
/// `q² − 1 | |G_e|`.
pub fn check_edge_laws(bk: &Backend, s: &StabGroup, orbits: &[StarOrbit]) -> Result<()> {
    let q = bk.q() as u128;
    let cm = q * q - 1;
    if bk.delta() % 2 == 1 {
        if let Some(o) = orbits.iter().find(|o| o.edge_order % cm == 0) {
            return Err(Error::violation(
                "edge stabilizer order for odd degree",
                format!("edge at {} label {} has |G_e| = {}", s.vertex, o.labels[0], o.edge_order),
            ));
        }
    } else if s.label == ClassLabel::SplitQuaternionic && !orbits.iter().any(|o| o.edge_order % cm == 0) {
        return Err(Error::violation(
            "edge stabilizer order for even degree",
            format!("no edge at {} has |G_e| divisible by {cm}", s.vertex),
        ));
    }
    Ok(())
}

/// Marks ray tails: maximal chains of valency-2 vertices ending at the
/// radius in which every step outward multiplies a rational stabilizer
/// order by `q^δ` and the connecting edge stabilizer is the inner vertex
/// stabilizer. A chain is a ray once it has at least `g + 2` steps. The ray
/// count is compared with the class number.
pub fn detect_rays(bk: &Backend, q: &mut QuotientGraph) {
    let step = (bk.q() as u128).pow(bk.delta());
    let min_steps = bk.genus() as usize + 2;
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); q.vertices.len()];
    for (ei, e) in q.edges.iter().enumerate() {
        adjacency[e.source].push((e.target, ei));
        adjacency[e.target].push((e.source, ei));
    }
    let mut rays = Vec::new();
    let mut on_ray = vec![false; q.vertices.len()];
    let mut in_x = vec![true; q.vertices.len()];
    for b in 0..q.vertices.len() {
        let vb = &q.vertices[b];
        if !vb.boundary || vb.valency != 2 || !vb.label.is_rational() || on_ray[b] {
            continue;
        }
        let mut chain = vec![b];
        let mut prev: Option<usize> = None;
        let mut outer = b;
        loop {
            let nexts: Vec<(usize, usize)> =
                adjacency[outer].iter().copied().filter(|&(t, _)| Some(t) != prev).collect();
            let [(inner, ei)] = nexts.as_slice() else { break };
            let (vo, vi) = (&q.vertices[outer], &q.vertices[*inner]);
            let nested = vi.label.is_rational()
                && vo.order == vi.order * step
                && q.edges[*ei].edge_order == vi.order
                && !chain.contains(inner);
            if !nested {
                break;
            }
            chain.push(*inner);
            if vi.valency != 2 {
                break;
            }
            prev = Some(outer);
            outer = *inner;
        }
        let steps = chain.len() - 1;
        if steps < min_steps {
            continue;
        }
        chain.reverse();
        let id = rays.len();
        for &v in &chain[1..] {
            on_ray[v] = true;
            in_x[v] = false;
            q.vertices[v].ray_id = Some(id);
        }
        q.vertices[chain[0]].ray_id = Some(id);
        rays.push(Ray { id, vertices: chain });
    }
    q.x = (0..q.vertices.len()).filter(|&v| in_x[v]).collect();
    if rays.len() as u64 != q.class_number {
        q.unresolved.push(format!(
            "found {} rays but the class number is {}; raise --radius beyond {}",
            rays.len(),
            q.class_number,
            q.radius
        ));
    }
    let boundary_off_ray: Vec<String> = q
        .vertices
        .iter()
        .filter(|v| v.boundary && v.ray_id.is_none())
        .map(|v| v.rep.to_string())
        .collect();
    if !boundary_off_ray.is_empty() {
        q.unresolved.push(format!("boundary vertices off every ray: {}", boundary_off_ray.join(", ")));
    }
    q.rays = rays;
}

/// `ω`, the cycle rank of the quotient graph.
pub fn free_rank(q: &QuotientGraph) -> usize {
    q.omega
}

/// The free factors `Z/(q+1)Z` contributed by isolated vertices with `CM`
/// stabilizer.
#[derive(Clone, Debug, Serialize)]
pub struct FreeProductReport {
    pub n: usize,
    pub factor: String,
    pub factors: Vec<String>,
    pub cm_vertices: Vec<String>,
    /// Isolated vertices with split quaternionic stabilizer; they add no
    /// factor.
    pub split_isolated: Vec<String>,
    pub omega: usize,
}

/// The free-product report; needs `δ = 1`.
pub fn free_product_report(bk: &Backend, q: &QuotientGraph) -> Result<FreeProductReport> {
    if bk.delta() != 1 {
        return Err(Error::Config("the free-product report needs a place of degree one".into()));
    }
    let factor = format!("Z/{}Z", bk.q() + 1);
    let cm: Vec<String> =
        q.vertices.iter().filter(|v| v.isolated && v.label == ClassLabel::CM).map(|v| v.rep.to_string()).collect();
    let split: Vec<String> = q
        .vertices
        .iter()
        .filter(|v| v.isolated && v.label == ClassLabel::SplitQuaternionic)
        .map(|v| v.rep.to_string())
        .collect();
    Ok(FreeProductReport {
        n: cm.len(),
        factors: vec![factor.clone(); cm.len()],
        factor,
        cm_vertices: cm,
        split_isolated: split,
        omega: q.omega,
    })
}

pub use export::{to_csv, to_dot, to_json};

#[cfg(test)]
mod tests;
