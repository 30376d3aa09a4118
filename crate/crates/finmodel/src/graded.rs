//! Graded vector spaces, graded linear maps, shifts, tensor products and
//! the Koszul sign rule.
//!
//! Grading is cohomological: an element of degree `n` lives in the `n`-th
//! component, differentials raise degree. Basis labels are canonical flat
//! tuples, so two equal constructions produce structurally identical
//! spaces.
//!
//! Sign convention, fixed once for the whole crate: applying a tensor
//! product of homogeneous maps `f_1 (x) ... (x) f_k` to homogeneous
//! elements `x_1 (x) ... (x) x_k` produces the sign
//! `(-1)^{sum_j |f_j| (|x_1| + ... + |x_{j-1}|)}`
//! ("maps act from the left", each map moves past the arguments before its
//! own). Every other sign in the crate is derived from this rule; its
//! correctness is audited downstream by the `d^2 = 0` and Leibniz test
//! suites rather than assumed.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Scalar};

/// A basis label: an atom or a flat tuple of atoms. Tensor products
/// concatenate tuples, so labels of iterated products are association-free.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Label {
    Atom(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Label {
        Label::Atom(s.into())
    }

    fn flatten(&self) -> Vec<Label> {
        match self {
            Label::Atom(_) => vec![self.clone()],
            Label::Tuple(v) => v.iter().flat_map(|l| l.flatten()).collect(),
        }
    }

    pub fn pair(a: &Label, b: &Label) -> Label {
        let mut v = a.flatten();
        v.extend(b.flatten());
        Label::Tuple(v)
    }

    pub fn tuple(parts: &[Label]) -> Label {
        Label::Tuple(parts.iter().flat_map(|l| l.flatten()).collect())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::Tuple(v) => {
                write!(f, "(")?;
                for (i, l) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A finitely supported graded vector space with named bases.
///
/// `dims` only stores nonzero dimensions. Labels are optional: large
/// mechanically generated spaces (high tensor powers) skip them, and
/// anything user-facing keeps them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedVectorSpace {
    field: Field,
    dims: BTreeMap<i64, usize>,
    labels: Option<BTreeMap<i64, Vec<Label>>>,
}

impl GradedVectorSpace {
    pub fn zero(field: Field) -> GradedVectorSpace {
        GradedVectorSpace { field, dims: BTreeMap::new(), labels: Some(BTreeMap::new()) }
    }

    /// Space with the given dimensions and synthetic labels `e{deg}_{i}`.
    pub fn from_dims(field: Field, dims: &[(i64, usize)]) -> GradedVectorSpace {
        let mut d = BTreeMap::new();
        for &(deg, n) in dims {
            if n > 0 {
                *d.entry(deg).or_insert(0) += n;
            }
        }
        let labels = d
            .iter()
            .map(|(&deg, &n)| {
                (deg, (0..n).map(|i| Label::atom(format!("e{deg}_{i}"))).collect())
            })
            .collect();
        GradedVectorSpace { field, dims: d, labels: Some(labels) }
    }

    pub fn with_labels(
        field: Field,
        labels: BTreeMap<i64, Vec<Label>>,
    ) -> Result<GradedVectorSpace> {
        let mut dims = BTreeMap::new();
        for (&deg, ls) in &labels {
            if !ls.is_empty() {
                dims.insert(deg, ls.len());
            }
        }
        let labels = labels.into_iter().filter(|(_, ls)| !ls.is_empty()).collect();
        Ok(GradedVectorSpace { field, dims, labels: Some(labels) })
    }

    fn from_dims_unlabeled(field: Field, dims: BTreeMap<i64, usize>) -> GradedVectorSpace {
        let dims: BTreeMap<i64, usize> = dims.into_iter().filter(|&(_, n)| n > 0).collect();
        GradedVectorSpace { field, dims, labels: None }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    /// Concentration interval `[a, b]`, or `None` for the zero space.
    pub fn interval(&self) -> Option<(i64, i64)> {
        let a = self.dims.keys().next()?;
        let b = self.dims.keys().next_back()?;
        Some((*a, *b))
    }

    pub fn label(&self, degree: i64, index: usize) -> Label {
        match &self.labels {
            Some(ls) => ls
                .get(&degree)
                .and_then(|v| v.get(index))
                .cloned()
                .unwrap_or_else(|| Label::atom(format!("e{degree}_{index}"))),
            None => Label::atom(format!("e{degree}_{index}")),
        }
    }

    pub fn labels_at(&self, degree: i64) -> Vec<Label> {
        (0..self.dim(degree)).map(|i| self.label(degree, i)).collect()
    }

    /// Global basis enumeration: degrees ascending, then index within the
    /// degree. The global order is the canonical order used for tensor
    /// power bases.
    pub fn global_dim(&self) -> usize {
        self.total_dim()
    }

    pub fn global_of(&self, degree: i64, index: usize) -> usize {
        let mut g = 0usize;
        for (&d, &n) in &self.dims {
            if d == degree {
                assert!(index < n, "basis index out of range");
                return g + index;
            }
            g += n;
        }
        panic!("degree {degree} not in support");
    }

    pub fn degree_index_of(&self, global: usize) -> (i64, usize) {
        let mut g = global;
        for (&d, &n) in &self.dims {
            if g < n {
                return (d, g);
            }
            g -= n;
        }
        panic!("global index {global} out of range");
    }

    pub fn degree_of_global(&self, global: usize) -> i64 {
        self.degree_index_of(global).0
    }

    /// Shifted space: `shift(V, s)^n = V^{n+s}`, labels carried over. In
    /// particular `shift(V, 1)` is the suspension.
    pub fn shift(&self, s: i64) -> GradedVectorSpace {
        let dims = self.dims.iter().map(|(&d, &n)| (d - s, n)).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|ls| ls.iter().map(|(&d, v)| (d - s, v.clone())).collect());
        GradedVectorSpace { field: self.field, dims, labels }
    }

    /// Binary tensor product. Dimensions are the convolution; the basis at
    /// each degree is the set of pairs ordered lexicographically by the
    /// pair of global indices, and labels are flat pairs.
    pub fn tensor(&self, other: &GradedVectorSpace) -> Result<GradedVectorSpace> {
        if self.field != other.field {
            return Err(Error::MixedField("tensor of spaces over different fields".into()));
        }
        let mut labels: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
        let keep_labels = (self.total_dim() as u64) * (other.total_dim() as u64) <= 4096;
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for gv in 0..self.global_dim() {
            let (dv, iv) = self.degree_index_of(gv);
            for gw in 0..other.global_dim() {
                let (dw, iw) = other.degree_index_of(gw);
                *dims.entry(dv + dw).or_insert(0) += 1;
                if keep_labels {
                    labels
                        .entry(dv + dw)
                        .or_default()
                        .push(Label::pair(&self.label(dv, iv), &other.label(dw, iw)));
                }
            }
        }
        // The loop above enumerates pairs in (gv, gw) lex order but groups
        // by degree as it goes, which preserves lex order inside each
        // degree: for fixed degree the pairs appear in increasing (gv, gw).
        if keep_labels {
            Ok(GradedVectorSpace { field: self.field, dims, labels: Some(labels) })
        } else {
            Ok(GradedVectorSpace::from_dims_unlabeled(self.field, dims))
        }
    }

    pub fn tensor_power(&self, m: usize) -> GradedVectorSpace {
        TensorIndex::new(self, m).space()
    }

    /// Direct sum, `self` components first within each degree.
    pub fn direct_sum(&self, other: &GradedVectorSpace) -> GradedVectorSpace {
        let mut dims = self.dims.clone();
        for (&d, &n) in &other.dims {
            *dims.entry(d).or_insert(0) += n;
        }
        let mut labels: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
        for (&d, _) in &dims {
            let mut v = Vec::new();
            for i in 0..self.dim(d) {
                v.push(self.label(d, i));
            }
            for i in 0..other.dim(d) {
                v.push(other.label(d, i));
            }
            labels.insert(d, v);
        }
        GradedVectorSpace { field: self.field, dims, labels: Some(labels) }
    }
}

/// Lazy index of the `m`-fold tensor power of a space.
///
/// Basis tuples of a fixed total degree are ordered lexicographically by
/// their component global indices, and ranked/unranked via precomputed
/// per-length counting tables instead of being materialized.
pub struct TensorIndex {
    base_degrees: Vec<i64>,
    field: Field,
    m: usize,
    /// counts[j][d] = number of length-j tuples of total degree d
    counts: Vec<BTreeMap<i64, u64>>,
}

impl TensorIndex {
    pub fn new(base: &GradedVectorSpace, m: usize) -> TensorIndex {
        let base_degrees: Vec<i64> =
            (0..base.global_dim()).map(|g| base.degree_of_global(g)).collect();
        let mut counts: Vec<BTreeMap<i64, u64>> = Vec::with_capacity(m + 1);
        let mut c0 = BTreeMap::new();
        c0.insert(0i64, 1u64);
        counts.push(c0);
        for j in 1..=m {
            let mut cj: BTreeMap<i64, u64> = BTreeMap::new();
            for (&d, &n) in &counts[j - 1] {
                for &bd in &base_degrees {
                    *cj.entry(d + bd).or_insert(0) += n;
                }
            }
            counts.push(cj);
        }
        TensorIndex { base_degrees, field: base.field(), m, counts }
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.counts[self.m].get(&degree).copied().unwrap_or(0) as usize
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.counts[self.m].iter().map(|(&d, &n)| (d, n as usize)).collect()
    }

    pub fn tuple_degree(&self, tuple: &[usize]) -> i64 {
        tuple.iter().map(|&g| self.base_degrees[g]).sum()
    }

    /// Lex rank of a tuple within its total degree.
    pub fn rank(&self, tuple: &[usize]) -> (i64, usize) {
        assert_eq!(tuple.len(), self.m);
        let degree = self.tuple_degree(tuple);
        let mut below = 0u64;
        let mut remaining = degree;
        for (j, &g) in tuple.iter().enumerate() {
            let suffix_len = self.m - j - 1;
            for earlier in 0..g {
                let need = remaining - self.base_degrees[earlier];
                below += self.counts[suffix_len].get(&need).copied().unwrap_or(0);
            }
            remaining -= self.base_degrees[g];
        }
        (degree, below as usize)
    }

    /// Inverse of `rank`.
    pub fn unrank(&self, degree: i64, index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.m);
        let mut idx = index as u64;
        let mut remaining = degree;
        for j in 0..self.m {
            let suffix_len = self.m - j - 1;
            let mut chosen = None;
            for g in 0..self.base_degrees.len() {
                let need = remaining - self.base_degrees[g];
                let cnt = self.counts[suffix_len].get(&need).copied().unwrap_or(0);
                if idx < cnt {
                    chosen = Some(g);
                    remaining = need;
                    break;
                }
                idx -= cnt;
            }
            out.push(chosen.expect("tuple index out of range"));
        }
        out
    }

    /// Calls `f` on every tuple of the given total degree, in lex order.
    pub fn for_each_tuple(&self, degree: i64, mut f: impl FnMut(usize, &[usize])) {
        let mut tuple = vec![0usize; self.m];
        let mut index = 0usize;
        self.walk(degree, 0, &mut tuple, &mut index, &mut f);
    }

    fn walk(
        &self,
        remaining: i64,
        j: usize,
        tuple: &mut Vec<usize>,
        index: &mut usize,
        f: &mut impl FnMut(usize, &[usize]),
    ) {
        if j == self.m {
            if remaining == 0 {
                f(*index, tuple);
                *index += 1;
            }
            return;
        }
        let suffix_len = self.m - j - 1;
        for g in 0..self.base_degrees.len() {
            let need = remaining - self.base_degrees[g];
            if self.counts[suffix_len].get(&need).copied().unwrap_or(0) == 0 {
                continue;
            }
            tuple[j] = g;
            self.walk(need, j + 1, tuple, index, f);
        }
    }

    /// The tensor power as a plain graded space (without labels when big).
    pub fn space(&self) -> GradedVectorSpace {
        let dims = self.dims().into_iter().collect();
        GradedVectorSpace::from_dims_unlabeled(self.field, dims)
    }

    /// Labeled variant for small powers, used in reports.
    pub fn labeled_space(&self, base: &GradedVectorSpace) -> GradedVectorSpace {
        let mut labels: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
        for (&deg, _) in &self.counts[self.m] {
            let mut v = Vec::new();
            self.for_each_tuple(deg, |_, tuple| {
                let parts: Vec<Label> = tuple
                    .iter()
                    .map(|&g| {
                        let (d, i) = base.degree_index_of(g);
                        base.label(d, i)
                    })
                    .collect();
                v.push(Label::tuple(&parts));
            });
            labels.insert(deg, v);
        }
        GradedVectorSpace::with_labels(self.field, labels).expect("labels consistent")
    }
}

/// A homogeneous element: a degree and coordinates in that degree's basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    pub degree: i64,
    pub coords: Vec<Scalar>,
}

impl Element {
    pub fn zero(field: Field, degree: i64, dim: usize) -> Element {
        Element { degree, coords: vec![field.zero(); dim] }
    }

    pub fn basis(space: &GradedVectorSpace, degree: i64, index: usize) -> Element {
        let mut e = Element::zero(space.field(), degree, space.dim(degree));
        e.coords[index] = space.field().one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Element) -> Element {
        assert_eq!(self.degree, other.degree, "adding elements of different degrees");
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.add(b)).collect();
        Element { degree: self.degree, coords }
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        Element { degree: self.degree, coords: self.coords.iter().map(|c| c.mul(s)).collect() }
    }
}

/// A graded linear map of fixed degree, stored as one matrix block per
/// source degree. Blocks are absent wherever their source or target
/// component is zero; an absent block is the zero map.
#[derive(Clone, PartialEq, Debug)]
pub struct GradedLinearMap {
    degree: i64,
    source: GradedVectorSpace,
    target: GradedVectorSpace,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedLinearMap {
    pub fn zero(source: &GradedVectorSpace, target: &GradedVectorSpace, degree: i64) -> Self {
        GradedLinearMap {
            degree,
            source: source.clone(),
            target: target.clone(),
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space
            .dims()
            .iter()
            .map(|(&d, &n)| (d, Matrix::identity(space.field(), n)))
            .collect();
        GradedLinearMap { degree: 0, source: space.clone(), target: space.clone(), blocks }
    }

    pub fn from_blocks(
        source: &GradedVectorSpace,
        target: &GradedVectorSpace,
        degree: i64,
        blocks: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (d, m) in blocks {
            let (rows, cols) = (target.dim(d + degree), source.dim(d));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::dimension(format!(
                    "block at degree {d}: expected {rows}x{cols}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            if rows > 0 && cols > 0 && !m.is_zero() {
                kept.insert(d, m);
            }
        }
        Ok(GradedLinearMap { degree, source: source.clone(), target: target.clone(), blocks: kept })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn source(&self) -> &GradedVectorSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedVectorSpace {
        &self.target
    }

    pub fn block(&self, source_degree: i64) -> Option<&Matrix> {
        self.blocks.get(&source_degree)
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Matrix> {
        &self.blocks
    }

    /// The block at a degree, materializing zeros for absent blocks.
    pub fn block_or_zero(&self, source_degree: i64) -> Matrix {
        match self.blocks.get(&source_degree) {
            Some(m) => m.clone(),
            None => Matrix::zeros(
                self.source.field(),
                self.target.dim(source_degree + self.degree),
                self.source.dim(source_degree),
            ),
        }
    }

    pub fn set_block(&mut self, source_degree: i64, m: Matrix) {
        assert_eq!(m.rows(), self.target.dim(source_degree + self.degree));
        assert_eq!(m.cols(), self.source.dim(source_degree));
        if m.is_zero() {
            self.blocks.remove(&source_degree);
        } else {
            self.blocks.insert(source_degree, m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// `self` after `other`: the composite `self . other`.
    pub fn compose(&self, other: &GradedLinearMap) -> GradedLinearMap {
        let mut blocks = BTreeMap::new();
        for (&d, inner) in &other.blocks {
            if let Some(outer) = self.blocks.get(&(d + other.degree)) {
                let m = outer.mul(inner);
                if !m.is_zero() {
                    blocks.insert(d, m);
                }
            }
        }
        GradedLinearMap {
            degree: self.degree + other.degree,
            source: other.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn add(&self, other: &GradedLinearMap) -> GradedLinearMap {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (&d, m) in &other.blocks {
            let combined = out.block_or_zero(d).add(m);
            out.set_block(d, combined);
        }
        out
    }

    pub fn sub(&self, other: &GradedLinearMap) -> GradedLinearMap {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> GradedLinearMap {
        let blocks = self.blocks.iter().map(|(&d, m)| (d, m.neg())).collect();
        GradedLinearMap {
            degree: self.degree,
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn scale(&self, s: &Scalar) -> GradedLinearMap {
        let blocks = self.blocks.iter().map(|(&d, m)| (d, m.scale(s))).collect();
        GradedLinearMap {
            degree: self.degree,
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn eval(&self, x: &Element) -> Element {
        let out_dim = self.target.dim(x.degree + self.degree);
        match self.blocks.get(&x.degree) {
            Some(m) => Element { degree: x.degree + self.degree, coords: m.mul_vec(&x.coords) },
            None => Element::zero(self.source.field(), x.degree + self.degree, out_dim),
        }
    }

    /// Value on a single basis vector of the source.
    pub fn eval_basis(&self, degree: i64, index: usize) -> Element {
        let out_deg = degree + self.degree;
        match self.blocks.get(&degree) {
            Some(m) => Element { degree: out_deg, coords: m.column(index) },
            None => Element::zero(self.source.field(), out_deg, self.target.dim(out_deg)),
        }
    }
}

/// The Koszul sign produced when a list of homogeneous maps is applied
/// slotwise to a list of homogeneous arguments: map `j` moves past the
/// arguments of slots `1..j`.
pub fn koszul_sign(map_degrees: &[i64], arg_degrees: &[i64]) -> i64 {
    assert_eq!(map_degrees.len(), arg_degrees.len());
    let mut exponent: i64 = 0;
    let mut prefix: i64 = 0;
    for (j, &fd) in map_degrees.iter().enumerate() {
        exponent += fd * prefix;
        prefix += arg_degrees[j];
    }
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Applies `f_1 (x) ... (x) f_k` to homogeneous elements `x_1, ..., x_k`
/// with the crate-wide Koszul rule, returning the resulting element of the
/// tensor product of the targets together with that space.
pub fn koszul_apply(
    maps: &[&GradedLinearMap],
    args: &[&Element],
) -> Result<(GradedVectorSpace, Element)> {
    if maps.len() != args.len() {
        return Err(Error::dimension(format!(
            "koszul_apply: {} maps but {} arguments",
            maps.len(),
            args.len()
        )));
    }
    if maps.is_empty() {
        return Err(Error::dimension("koszul_apply: empty slot list"));
    }
    let field = maps[0].source().field();
    for (f, x) in maps.iter().zip(args) {
        if f.source().dim(x.degree) != x.coords.len() {
            return Err(Error::dimension(format!(
                "koszul_apply: argument of degree {} has {} coordinates, map source component has dimension {}",
                x.degree,
                x.coords.len(),
                f.source().dim(x.degree)
            )));
        }
    }
    let map_degrees: Vec<i64> = maps.iter().map(|f| f.degree()).collect();
    let arg_degrees: Vec<i64> = args.iter().map(|x| x.degree).collect();
    let sign = koszul_sign(&map_degrees, &arg_degrees);

    let values: Vec<Element> = maps.iter().zip(args).map(|(f, x)| f.eval(x)).collect();
    // assemble the tensor of the outputs in the product of the targets
    let mut result_space = maps[0].target().clone();
    for f in &maps[1..] {
        result_space = result_space.tensor(f.target())?;
    }
    let out_degree: i64 = values.iter().map(|v| v.degree).sum();
    let mut out = Element::zero(field, out_degree, result_space.dim(out_degree));

    // walk all combinations of nonzero coordinates; the product basis at a
    // fixed degree is lex-ordered by the tuple of global indices, so each
    // combination lands at its mixed-tuple lex rank
    fn walk(
        values: &[Element],
        maps: &[&GradedLinearMap],
        result_space: &GradedVectorSpace,
        picked: &mut Vec<(usize, Scalar)>,
        out: &mut Element,
    ) {
        let j = picked.len();
        if j == values.len() {
            let mut coeff = picked[0].1.clone();
            for (_, c) in &picked[1..] {
                coeff = coeff.mul(c);
            }
            let g_tuple: Vec<usize> = picked
                .iter()
                .zip(values.iter())
                .zip(maps.iter())
                .map(|(((i, _), v), f)| f.target().global_of(v.degree, *i))
                .collect();
            let global = rank_mixed_tuple(
                &maps.iter().map(|f| f.target()).collect::<Vec<_>>(),
                &g_tuple,
            );
            debug_assert_eq!(result_space.dim(out.degree), out.coords.len());
            out.coords[global] = out.coords[global].add(&coeff);
            return;
        }
        for (i, c) in values[j].coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            picked.push((i, c.clone()));
            walk(values, maps, result_space, picked, out);
            picked.pop();
        }
    }

    if values.iter().all(|v| !v.is_zero()) {
        let mut picked = Vec::new();
        walk(&values, maps, &result_space, &mut picked, &mut out);
    }
    let out = if sign == 1 { out } else { out.scale(&field.one().neg()) };
    Ok((result_space, out))
}

/// Lex rank of a mixed tuple (one global index per factor space) among all
/// tuples of the same total degree; this is the column index of the tuple
/// in the corresponding tensor-product component.
pub fn mixed_rank(spaces: &[&GradedVectorSpace], tuple: &[usize]) -> usize {
    rank_mixed_tuple(spaces, tuple)
}

fn rank_mixed_tuple(spaces: &[&GradedVectorSpace], tuple: &[usize]) -> usize {
    // counts[j][d]: number of suffix tuples over spaces[j..] of degree d
    let k = spaces.len();
    let mut counts: Vec<BTreeMap<i64, u64>> = vec![BTreeMap::new(); k + 1];
    counts[k].insert(0, 1);
    for j in (0..k).rev() {
        let mut cj: BTreeMap<i64, u64> = BTreeMap::new();
        for g in 0..spaces[j].global_dim() {
            let dg = spaces[j].degree_of_global(g);
            for (&d, &n) in &counts[j + 1] {
                *cj.entry(d + dg).or_insert(0) += n;
            }
        }
        counts[j] = cj;
    }
    let total: i64 = tuple
        .iter()
        .zip(spaces.iter())
        .map(|(&g, s)| s.degree_of_global(g))
        .sum();
    let mut below = 0u64;
    let mut remaining = total;
    for (j, (&g, s)) in tuple.iter().zip(spaces.iter()).enumerate() {
        for earlier in 0..g {
            let need = remaining - s.degree_of_global(earlier);
            below += counts[j + 1].get(&need).copied().unwrap_or(0);
        }
        remaining -= s.degree_of_global(g);
    }
    below as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn space(dims: &[(i64, usize)]) -> GradedVectorSpace {
        GradedVectorSpace::from_dims(Q, dims)
    }

    #[test]
    fn shift_reindexes() {
        let v = space(&[(0, 1)]);
        let s = v.shift(1);
        assert_eq!(s.dim(-1), 1);
        assert_eq!(s.dim(0), 0);

        let v = space(&[(-1, 1), (0, 2)]);
        let s = v.shift(-2);
        assert_eq!(s.dim(1), 1);
        assert_eq!(s.dim(2), 2);

        assert_eq!(v.shift(0), v);
    }

    #[test]
    fn shift_carries_labels() {
        let v = space(&[(0, 1)]);
        assert_eq!(v.shift(1).label(-1, 0), v.label(0, 0));
    }

    #[test]
    fn tensor_dims_convolve() {
        let v = space(&[(-1, 1), (0, 1)]);
        let t = v.tensor(&v).unwrap();
        assert_eq!(t.dim(-2), 1);
        assert_eq!(t.dim(-1), 2);
        assert_eq!(t.dim(0), 1);
        assert_eq!(t.total_dim(), 4);
    }

    #[test]
    fn tensor_with_unit_space_is_isomorphic() {
        let v = space(&[(-2, 3), (0, 1)]);
        let unit = space(&[(0, 1)]);
        let t = v.tensor(&unit).unwrap();
        assert_eq!(t.dims(), v.dims());
    }

    #[test]
    fn tensor_power_concentration() {
        // space concentrated in [a, b]: the m-th power sits in [ma, mb]
        let v = space(&[(-2, 1), (-1, 2), (0, 1)]);
        for m in 1..=4 {
            let p = v.tensor_power(m);
            let (lo, hi) = p.interval().unwrap();
            assert_eq!(lo, -2 * m as i64);
            assert_eq!(hi, 0);
        }
    }

    #[test]
    fn tensor_index_rank_unrank_round_trip() {
        let v = space(&[(-1, 2), (0, 1)]);
        let idx = TensorIndex::new(&v, 3);
        for deg in -3..=0 {
            let n = idx.dim(deg);
            for i in 0..n {
                let t = idx.unrank(deg, i);
                assert_eq!(idx.rank(&t), (deg, i));
            }
        }
        // dims agree with the materialized triple tensor
        let t3 = v.tensor(&v).unwrap().tensor(&v).unwrap();
        for deg in -3..=0 {
            assert_eq!(idx.dim(deg), t3.dim(deg));
        }
    }

    fn one_dim_map(src: &GradedVectorSpace, tgt: &GradedVectorSpace, deg: i64) -> GradedLinearMap {
        // sends each basis vector of src to the first basis vector of the
        // target component, when present
        let mut blocks = BTreeMap::new();
        for (&d, &n) in src.dims().iter() {
            let rows = tgt.dim(d + deg);
            if rows == 0 {
                continue;
            }
            let mut m = Matrix::zeros(Q, rows, n);
            for c in 0..n {
                m.set(0, c, Q.one());
            }
            blocks.insert(d, m);
        }
        GradedLinearMap::from_blocks(src, tgt, deg, blocks).unwrap()
    }

    #[test]
    fn koszul_apply_no_sign_for_even_maps() {
        let v = space(&[(0, 1), (1, 1)]);
        let id = GradedLinearMap::identity(&v);
        let x = Element::basis(&v, 1, 0);
        let y = Element::basis(&v, 0, 0);
        let (_, out) = koszul_apply(&[&id, &id], &[&x, &y]).unwrap();
        assert!(!out.is_zero());
        assert!(out.coords.iter().any(|c| c.is_one()));
    }

    #[test]
    fn koszul_apply_odd_map_past_odd_element() {
        // (id (x) g) with |g| = 1 applied to x (x) y with |x| = 1 gives -1
        let v = space(&[(0, 1), (1, 1)]);
        let id = GradedLinearMap::identity(&v);
        let g = one_dim_map(&v, &v, 1); // degree 1
        let x = Element::basis(&v, 1, 0);
        let y = Element::basis(&v, 0, 0);
        let (_, out) = koszul_apply(&[&id, &g], &[&x, &y]).unwrap();
        let nonzero: Vec<&Scalar> = out.coords.iter().filter(|c| !c.is_zero()).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(*nonzero[0], Q.from_integer(-1));
    }

    #[test]
    fn koszul_apply_first_slot_sees_nothing() {
        // (g (x) id): nothing moves past g, sign +1
        let v = space(&[(0, 1), (1, 1)]);
        let id = GradedLinearMap::identity(&v);
        let g = one_dim_map(&v, &v, 1);
        let x = Element::basis(&v, 0, 0);
        let y = Element::basis(&v, 1, 0);
        let (_, out) = koszul_apply(&[&g, &id], &[&x, &y]).unwrap();
        let nonzero: Vec<&Scalar> = out.coords.iter().filter(|c| !c.is_zero()).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(*nonzero[0], Q.from_integer(1));
    }

    #[test]
    fn koszul_interchange() {
        // (f (x) id) after (id (x) g) agrees with the direct (f (x) g), and
        // differs from (id (x) g) after (f (x) id) by (-1)^{|f||g|}.
        // Exhaustive over the basis of a small space, odd f and g.
        let v = space(&[(0, 1), (1, 1), (2, 1)]);
        let f = one_dim_map(&v, &v, 1);
        let g = one_dim_map(&v, &v, 1);
        let id = GradedLinearMap::identity(&v);
        for dx in 0..=1i64 {
            for dy in 0..=1i64 {
                let x = Element::basis(&v, dx, 0);
                let y = Element::basis(&v, dy, 0);
                let (_, direct) = koszul_apply(&[&f, &g], &[&x, &y]).unwrap();
                // f (x) id after applying g to y alone
                let gy = g.eval(&y);
                let (_, route1) = koszul_apply(&[&f, &id], &[&x, &gy]).unwrap();
                let route1 = route1.scale(&Q.from_integer(koszul_sign(&[0, 1], &[dx, dy])));
                assert_eq!(route1.coords, direct.coords, "dx={dx} dy={dy}");
                // id (x) g after applying f to x alone: opposite order,
                // related by (-1)^{|f||g|} = -1
                let fx = f.eval(&x);
                let (_, route2) = koszul_apply(&[&id, &g], &[&fx, &y]).unwrap();
                let route2 = route2.scale(&Q.from_integer(-1));
                assert_eq!(route2.coords, direct.coords, "other order dx={dx} dy={dy}");
            }
        }
    }

    proptest! {
        #[test]
        fn tensor_dim_matches_enumeration(
            dims_a in proptest::collection::vec((-3i64..3, 1usize..3), 1..3),
            dims_b in proptest::collection::vec((-3i64..3, 1usize..3), 1..3),
        ) {
            let a = GradedVectorSpace::from_dims(Q, &dims_a);
            let b = GradedVectorSpace::from_dims(Q, &dims_b);
            let t = a.tensor(&b).unwrap();
            // direct enumeration of pairs
            let mut expected: BTreeMap<i64, usize> = BTreeMap::new();
            for ga in 0..a.global_dim() {
                for gb in 0..b.global_dim() {
                    *expected
                        .entry(a.degree_of_global(ga) + b.degree_of_global(gb))
                        .or_insert(0) += 1;
                }
            }
            prop_assert_eq!(t.dims().clone(), expected);
        }

        #[test]
        fn koszul_sign_is_multiplicative_in_prefix(
            fdeg in -2i64..3, xdeg in -2i64..3, ydeg in -2i64..3,
        ) {
            // moving one map past two elements equals moving past each
            let one = koszul_sign(&[0, fdeg], &[xdeg + ydeg, 0]);
            let two = koszul_sign(&[0, 0, fdeg], &[xdeg, ydeg, 0]);
            prop_assert_eq!(one, two);
        }
    }
}
