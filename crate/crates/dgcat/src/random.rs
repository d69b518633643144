//! Seeded random diagrams and cochains for the randomized suites.
//!
//! A random diagram is a poset-indexed family of subcomplexes of one direct
//! sum of elementary pieces (a point `K` or an edge `K → K`), each value then
//! moved by its own unimodular change of basis. Arrows are conjugated
//! inclusions, so functoriality holds by construction and the cohomology of
//! each value is known.

use crate::diagram::FiniteDiagram;
use crate::mapping::{MappingCochain, MappingSpace};
use crate::poset::Poset;
use ghc_homalg::{GradedMap, GradedSpace, LadderComplex, Scalar, SparseMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    /// `K` in degree `d`, zero differential.
    Point(i64),
    /// `K → K` from degree `d` to `d + 1`, identity differential.
    Edge(i64),
}

impl Piece {
    fn occupies(&self, n: i64) -> bool {
        match *self {
            Piece::Point(d) => n == d,
            Piece::Edge(d) => n == d || n == d + 1,
        }
    }
}

/// Shape of a random diagram.
#[derive(Clone, Copy, Debug)]
pub struct DiagramShape {
    pub lo: i64,
    /// Number of degrees, at least 2.
    pub span: i64,
    pub pieces: usize,
    /// Only edges, so every value is acyclic.
    pub acyclic: bool,
}

impl Default for DiagramShape {
    fn default() -> Self {
        DiagramShape { lo: -1, span: 3, pieces: 5, acyclic: false }
    }
}

pub fn random_pieces(rng: &mut ChaCha8Rng, shape: &DiagramShape) -> Vec<Piece> {
    (0..shape.pieces)
        .map(|_| {
            if shape.acyclic || rng.gen_bool(0.5) {
                Piece::Edge(shape.lo + rng.gen_range(0..shape.span - 1))
            } else {
                Piece::Point(shape.lo + rng.gen_range(0..shape.span))
            }
        })
        .collect()
}

/// Order generated by pairs `a < b` of object indices, each kept with
/// probability `p`, optionally with the last object made a top.
pub fn random_poset(rng: &mut ChaCha8Rng, n: usize, p: f64, with_top: bool) -> Poset {
    let mut rel = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) || (with_top && b == n - 1) {
                rel.push((a, b));
            }
        }
    }
    Poset::new(n, &rel).expect("index order rules out cycles")
}

/// `(P, P⁻¹)` with `P` a product of integer elementary matrices.
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> (SparseMatrix, SparseMatrix) {
    let mut p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut inv = p.clone();
    if n >= 2 {
        for _ in 0..2 * n {
            let s = rng.gen_range(0..n);
            let t = (s + rng.gen_range(1..n)) % n;
            let a = [-2, -1, 1, 2][rng.gen_range(0..4)];
            for j in 0..n {
                p[s][j] += a * p[t][j];
            }
            for row in inv.iter_mut() {
                row[t] -= a * row[s];
            }
        }
    }
    let dense = |m: &Vec<Vec<i64>>| {
        let data: Vec<Vec<Scalar>> = m.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect();
        SparseMatrix::from_dense(n, n, &data)
    };
    (dense(&p), dense(&inv))
}

/// Sum of the given pieces, in their list order per degree.
fn standard(pieces: &[Piece], lo: i64, span: i64) -> (GradedSpace, Vec<SparseMatrix>) {
    let index = |n: i64| -> Vec<usize> { (0..pieces.len()).filter(|&k| pieces[k].occupies(n)).collect() };
    let dims: Vec<usize> = (lo..lo + span).map(|n| index(n).len()).collect();
    let space = GradedSpace::from_dims(lo, &dims);
    let blocks = (lo..lo + span)
        .map(|n| {
            let (src, dst) = (index(n), index(n + 1));
            let entries = src.iter().enumerate().filter_map(|(j, &k)| match pieces[k] {
                Piece::Edge(d) if d == n => Some((dst.iter().position(|&x| x == k).unwrap(), j, Scalar::one())),
                _ => None,
            });
            SparseMatrix::from_triplets(dst.len(), src.len(), entries.collect::<Vec<_>>())
        })
        .collect();
    (space, blocks)
}

pub fn random_complex(rng: &mut ChaCha8Rng, shape: &DiagramShape) -> LadderComplex {
    let pieces = random_pieces(rng, shape);
    let d = random_diagram_from(rng, Poset::discrete(1), &pieces, shape);
    d.value(0).clone()
}

pub fn random_diagram(rng: &mut ChaCha8Rng, poset: Poset, shape: &DiagramShape) -> FiniteDiagram {
    let pieces = random_pieces(rng, shape);
    random_diagram_from(rng, poset, &pieces, shape)
}

fn random_diagram_from(rng: &mut ChaCha8Rng, poset: Poset, pieces: &[Piece], shape: &DiagramShape) -> FiniteDiagram {
    let n = poset.len();
    let own: Vec<Vec<bool>> = (0..n).map(|_| pieces.iter().map(|_| rng.gen_bool(0.5)).collect()).collect();
    let members: Vec<Vec<usize>> =
        (0..n).map(|i| (0..pieces.len()).filter(|&k| (0..n).any(|h| poset.leq(h, i) && own[h][k])).collect()).collect();
    let degrees: Vec<i64> = (shape.lo..shape.lo + shape.span).collect();
    let mut values = Vec::new();
    let mut bases: Vec<BTreeMap<i64, (SparseMatrix, SparseMatrix)>> = Vec::new();
    for m in &members {
        let sub: Vec<Piece> = m.iter().map(|&k| pieces[k]).collect();
        let (space, blocks) = standard(&sub, shape.lo, shape.span);
        let pm: BTreeMap<i64, (SparseMatrix, SparseMatrix)> = degrees.iter().map(|&d| (d, unimodular(rng, space.dim(d)))).collect();
        let conj: Vec<SparseMatrix> = degrees
            .iter()
            .zip(blocks)
            .map(|(&d, b)| match pm.get(&(d + 1)) {
                Some((p, _)) => p.mul(&b).mul(&pm[&d].1),
                None => b,
            })
            .collect();
        values.push(LadderComplex::from_blocks(space, conj).expect("conjugated pieces form a complex"));
        bases.push(pm);
    }
    let mut arrows = BTreeMap::new();
    for (a, b) in poset.relations() {
        let blocks = degrees
            .iter()
            .map(|&d| {
                let src: Vec<usize> = members[a].iter().copied().filter(|&k| pieces[k].occupies(d)).collect();
                let dst: Vec<usize> = members[b].iter().copied().filter(|&k| pieces[k].occupies(d)).collect();
                let incl = SparseMatrix::from_triplets(
                    dst.len(),
                    src.len(),
                    src.iter().enumerate().map(|(j, k)| (dst.iter().position(|x| x == k).unwrap(), j, Scalar::one())).collect::<Vec<_>>(),
                );
                (d, bases[b][&d].0.mul(&incl).mul(&bases[a][&d].1))
            })
            .collect();
        let f = GradedMap::new(values[a].space(), values[b].space(), 0, blocks).expect("inclusion shapes");
        arrows.insert((a, b), f);
    }
    FiniteDiagram::new(poset, values, arrows).expect("conjugated inclusions are functorial")
}

pub fn random_graded_map(rng: &mut ChaCha8Rng, dom: &GradedSpace, cod: &GradedSpace, degree: i64, density: f64) -> GradedMap {
    let blocks = dom
        .degrees()
        .map(|n| {
            let (r, c) = (cod.dim(n + degree), dom.dim(n));
            let mut entries = Vec::new();
            for i in 0..r {
                for j in 0..c {
                    if rng.gen_bool(density) {
                        entries.push((i, j, Scalar::from_int(rng.gen_range(-2..=2))));
                    }
                }
            }
            (n, SparseMatrix::from_triplets(r, c, entries))
        })
        .collect();
    GradedMap::new(dom, cod, degree, blocks).expect("random block shapes")
}

/// Random element of `map(V, W)^n`, every strict chain populated.
pub fn random_cochain(rng: &mut ChaCha8Rng, space: &MappingSpace, degree: i64, density: f64) -> MappingCochain {
    let mut out = MappingCochain::zero(degree);
    for c in space.chains() {
        let v = space.source().value(c[0]).space();
        let w = space.target().value(*c.last().unwrap()).space();
        let f = random_graded_map(rng, v, w, degree - (c.len() as i64 - 1), density);
        out.insert(c.clone(), f).unwrap();
    }
    out
}
