//! Cochain complexes, cohomology with chosen splittings, mapping cones,
//! smart truncation of DG-algebras and quasi-isomorphism checks.
//!
//! Cohomology comes with full contraction data (inclusion, projection,
//! homotopy) satisfying the side conditions needed by homotopy transfer:
//! `pi . iota = 1`, `1 - iota . pi = d h + h d`, `h . iota = 0`,
//! `pi . h = 0`, `h . h = 0`. The splitting is chosen deterministically
//! from rref pivots, so minimal models built on top of it are reproducible.

use std::collections::BTreeMap;

use crate::ainf::DGAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Scalar};
use crate::graded::{mixed_rank, Element, GradedLinearMap, GradedVectorSpace, Label};

/// A cochain complex: a graded space with a square-zero differential of
/// degree +1. `d . d = 0` is checked at construction.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    space: GradedVectorSpace,
    d: GradedLinearMap,
}

impl CochainComplex {
    pub fn new(space: GradedVectorSpace, d: GradedLinearMap) -> Result<CochainComplex> {
        if d.degree() != 1 {
            return Err(Error::validation(format!(
                "differential must have degree +1, got {}",
                d.degree()
            )));
        }
        if d.source().dims() != space.dims() || d.target().dims() != space.dims() {
            return Err(Error::dimension(
                "differential source/target do not match the underlying space",
            ));
        }
        let dd = d.compose(&d);
        if !dd.is_zero() {
            let bad = dd
                .blocks()
                .iter()
                .find(|(_, m)| !m.is_zero())
                .map(|(&deg, _)| deg)
                .unwrap_or(0);
            return Err(Error::math(format!("d^2 != 0 starting at degree {bad}")));
        }
        Ok(CochainComplex { space, d })
    }

    /// Complex with zero differential.
    pub fn with_zero_differential(space: GradedVectorSpace) -> CochainComplex {
        let d = GradedLinearMap::zero(&space, &space, 1);
        CochainComplex { space, d }
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn d(&self) -> &GradedLinearMap {
        &self.d
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.space.dim(degree)
    }

    /// Cohomology dimensions per degree by rank-nullity.
    pub fn h_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for n in self.space.degrees() {
            let rank_out = self.d.block(n).map_or(0, Matrix::rank);
            let rank_in = self.d.block(n - 1).map_or(0, Matrix::rank);
            let h = self.space.dim(n) - rank_out - rank_in;
            if h > 0 {
                out.insert(n, h);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.h_dims().is_empty()
    }
}

/// Cohomology of a complex together with a deterministic contraction.
#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub h: GradedVectorSpace,
    /// iota: H -> C, degree 0; lands in cocycles.
    pub incl: GradedLinearMap,
    /// pi: C -> H, degree 0.
    pub proj: GradedLinearMap,
    /// h: C -> C, degree -1.
    pub homotopy: GradedLinearMap,
}

impl CohomologyData {
    fn verify(&self, complex: &CochainComplex) -> Result<()> {
        let d = complex.d();
        let id_h = GradedLinearMap::identity(&self.h);
        let id_c = GradedLinearMap::identity(complex.space());
        if self.proj.compose(&self.incl) != id_h {
            return Err(Error::internal("cohomology splitting: pi . iota != 1"));
        }
        let lhs = id_c.sub(&self.incl.compose(&self.proj));
        let rhs = d.compose(&self.homotopy).add(&self.homotopy.compose(d));
        if lhs != rhs {
            return Err(Error::internal("cohomology splitting: 1 - iota pi != dh + hd"));
        }
        if !self.homotopy.compose(&self.incl).is_zero() {
            return Err(Error::internal("cohomology splitting: h . iota != 0"));
        }
        if !self.proj.compose(&self.homotopy).is_zero() {
            return Err(Error::internal("cohomology splitting: pi . h != 0"));
        }
        if !self.homotopy.compose(&self.homotopy).is_zero() {
            return Err(Error::internal("cohomology splitting: h . h != 0"));
        }
        if !d.compose(&self.incl).is_zero() {
            return Err(Error::internal("cohomology splitting: iota image not closed"));
        }
        Ok(())
    }
}

/// Cohomology with the default splitting.
pub fn cohomology(complex: &CochainComplex) -> Result<CohomologyData> {
    cohomology_with_preferred(complex, &[])
}

/// Cohomology where the given cocycles are used, in order, as the first
/// representatives of their degree whenever they are independent of the
/// boundaries and of earlier choices. This is how a unit cocycle ends up
/// as the first basis vector of `H^0`.
pub fn cohomology_with_preferred(
    complex: &CochainComplex,
    preferred: &[Element],
) -> Result<CohomologyData> {
    let space = complex.space();
    let field = space.field();
    let d = complex.d();

    let mut h_labels: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    let mut incl_blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut proj_blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut h_blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    // complement of the cocycles at the previous degree, kept for preimages
    let mut prev_vmat: Option<Matrix> = None;
    let mut prev_degree: Option<i64> = None;

    let degrees: Vec<i64> = space.degrees().collect();
    for &n in &degrees {
        let dim = space.dim(n);
        let d_out = d.block(n);
        let d_in = if prev_degree == Some(n - 1) { d.block(n - 1) } else { None };

        // boundaries: image basis of the incoming differential
        let bmat = match d_in {
            Some(m) => m.column_space_basis(),
            None => Matrix::zeros(field, dim, 0),
        };
        // cocycles
        let zmat = match d_out {
            Some(m) => m.kernel_basis(),
            None => Matrix::identity(field, dim),
        };

        // representatives: preferred cocycles first, then kernel columns
        let mut cands = bmat.clone();
        for p in preferred.iter().filter(|p| p.degree == n) {
            if p.coords.len() != dim {
                return Err(Error::dimension("preferred vector has wrong length"));
            }
            if let Some(m) = d_out {
                if !m.mul_vec(&p.coords).iter().all(Scalar::is_zero) {
                    return Err(Error::validation(format!(
                        "preferred vector in degree {n} is not a cocycle"
                    )));
                }
            }
            let pm = Matrix::new(field, dim, 1, p.coords.clone())?;
            cands = cands.hstack(&pm);
        }
        cands = cands.hstack(&zmat);
        let (_, pivots) = cands.rref();
        let b_count = bmat.cols();
        let h_cols: Vec<usize> = pivots.iter().copied().filter(|&c| c >= b_count).collect();
        let hreps = cands.select_columns(&h_cols);

        // complement of the cocycles: greedy extension by standard vectors
        let with_std = bmat.hstack(&hreps).hstack(&Matrix::identity(field, dim));
        let (_, pivots) = with_std.rref();
        let base = bmat.cols() + hreps.cols();
        let v_cols: Vec<usize> =
            pivots.iter().copied().filter(|&c| c >= base).map(|c| c - base).collect();
        let vmat = Matrix::identity(field, dim).select_columns(&v_cols);

        let h_dim = hreps.cols();
        if h_dim > 0 {
            h_labels.insert(n, (0..h_dim).map(|i| Label::atom(format!("h{n}_{i}"))).collect());
        }

        // change of basis: columns [B | H | V] span C^n
        let p_mat = bmat.hstack(&hreps).hstack(&vmat);
        let p_inv = p_mat
            .solve_matrix(&Matrix::identity(field, dim))?
            .ok_or_else(|| Error::internal("B+H+V do not span the component"))?;
        // rows of p_inv give coordinates in the adapted basis
        let b_rows: Vec<usize> = (0..bmat.cols()).collect();
        let h_rows: Vec<usize> = (bmat.cols()..bmat.cols() + h_dim).collect();
        let b_coords = p_inv.transpose().select_columns(&b_rows).transpose();
        let h_coords = p_inv.transpose().select_columns(&h_rows).transpose();

        if h_dim > 0 {
            incl_blocks.insert(n, hreps.clone());
            proj_blocks.insert(n, h_coords);
        }

        // homotopy on boundaries: h(b) = the unique preimage of b inside the
        // previous degree's complement of the cocycles
        if bmat.cols() > 0 {
            let d_in = d_in.expect("boundaries require an incoming differential");
            let pv = prev_vmat.as_ref().expect("complement tracked for previous degree");
            let restricted = d_in.mul(pv);
            let x = restricted
                .solve_matrix(&bmat)?
                .ok_or_else(|| Error::internal("boundary without preimage in complement"))?;
            let preimages = pv.mul(&x);
            h_blocks.insert(n, preimages.mul(&b_coords));
        }

        prev_vmat = Some(vmat);
        prev_degree = Some(n);
    }

    let h_space = GradedVectorSpace::with_labels(field, h_labels)?;
    let data = CohomologyData {
        incl: GradedLinearMap::from_blocks(&h_space, space, 0, incl_blocks)?,
        proj: GradedLinearMap::from_blocks(space, &h_space, 0, proj_blocks)?,
        homotopy: GradedLinearMap::from_blocks(space, space, -1, h_blocks)?,
        h: h_space,
    };
    data.verify(complex)?;
    Ok(data)
}

/// Mapping cone of a chain map, with the two structure maps of the
/// triangle `C -> D -> cone -> shift(C, 1)`: the inclusion of `D` and the
/// projection onto the shift of `C`.
pub struct ConeData {
    pub cone: CochainComplex,
    pub from_target: GradedLinearMap,
    pub to_shifted_source: GradedLinearMap,
}

/// Checks that `f` is a degree-0 chain map between the two complexes.
pub fn is_chain_map(f: &GradedLinearMap, c: &CochainComplex, d: &CochainComplex) -> bool {
    f.degree() == 0
        && f.source().dims() == c.space().dims()
        && f.target().dims() == d.space().dims()
        && f.compose(c.d()) == d.d().compose(f)
}

pub fn mapping_cone(
    f: &GradedLinearMap,
    c: &CochainComplex,
    d: &CochainComplex,
) -> Result<ConeData> {
    if !is_chain_map(f, c, d) {
        return Err(Error::math("mapping cone of a non-chain-map"));
    }
    let field = c.space().field();
    let shifted = c.space().shift(1);
    let cone_space = shifted.direct_sum(d.space());
    // cone differential on (c, x): (-d c, f c + d x)
    let mut blocks = BTreeMap::new();
    for n in cone_space.degrees().collect::<Vec<_>>() {
        let c_dim = shifted.dim(n); // = C^{n+1}
        let d_dim = d.space().dim(n);
        let out_c = shifted.dim(n + 1); // = C^{n+2}
        let out_d = d.space().dim(n + 1);
        let rows = out_c + out_d;
        let cols = c_dim + d_dim;
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zeros(field, rows, cols);
        if let Some(dc) = c.d().block(n + 1) {
            for r in 0..out_c {
                for cc in 0..c_dim {
                    m.set(r, cc, dc.at(r, cc).neg());
                }
            }
        }
        if let Some(fb) = f.block(n + 1) {
            for r in 0..out_d {
                for cc in 0..c_dim {
                    m.set(out_c + r, cc, fb.at(r, cc).clone());
                }
            }
        }
        if let Some(dd) = d.d().block(n) {
            for r in 0..out_d {
                for cc in 0..d_dim {
                    m.set(out_c + r, c_dim + cc, dd.at(r, cc).clone());
                }
            }
        }
        blocks.insert(n, m);
    }
    let cone_d = GradedLinearMap::from_blocks(&cone_space, &cone_space, 1, blocks)?;
    let cone = CochainComplex::new(cone_space.clone(), cone_d)
        .map_err(|e| Error::internal(format!("cone differential does not square to zero: {e}")))?;

    let mut incl_blocks = BTreeMap::new();
    let mut proj_blocks = BTreeMap::new();
    for n in cone_space.degrees().collect::<Vec<_>>() {
        let c_dim = shifted.dim(n);
        let d_dim = d.space().dim(n);
        if d_dim > 0 {
            let mut m = Matrix::zeros(field, c_dim + d_dim, d_dim);
            for i in 0..d_dim {
                m.set(c_dim + i, i, field.one());
            }
            incl_blocks.insert(n, m);
        }
        if c_dim > 0 {
            let mut m = Matrix::zeros(field, c_dim, c_dim + d_dim);
            for i in 0..c_dim {
                m.set(i, i, field.one());
            }
            proj_blocks.insert(n, m);
        }
    }
    let from_target = GradedLinearMap::from_blocks(d.space(), &cone_space, 0, incl_blocks)?;
    let to_shifted_source = GradedLinearMap::from_blocks(&cone_space, &shifted, 0, proj_blocks)?;
    Ok(ConeData { cone, from_target, to_shifted_source })
}

/// True iff the mapping cone of `f` is acyclic.
pub fn quasi_iso_check(
    f: &GradedLinearMap,
    c: &CochainComplex,
    d: &CochainComplex,
) -> Result<bool> {
    if !is_chain_map(f, c, d) {
        return Err(Error::math("quasi-isomorphism check on a non-chain-map"));
    }
    Ok(mapping_cone(f, c, d)?.cone.is_acyclic())
}

/// The result of truncating a DG-algebra to degrees <= 0.
pub struct Truncation {
    pub algebra: DGAlgebra,
    /// Inclusion into the original complex, a chain map.
    pub inclusion: GradedLinearMap,
    /// Set when `H^{>0}` of the input is nonzero, in which case the
    /// inclusion is not a quasi-isomorphism.
    pub not_quasi_iso_warning: bool,
}

/// The sub-DG-algebra of `B` spanned by all components in negative degrees
/// and the degree-0 cocycles. The unit stays a distinguished basis vector.
pub fn smart_truncate_leq0(b: &DGAlgebra) -> Result<Truncation> {
    let complex = b.complex();
    let space = complex.space();
    let field = space.field();
    let d = complex.d();

    // degree-0 cocycles, unit first
    let dim0 = space.dim(0);
    let unit_vec = {
        let mut v = Matrix::zeros(field, dim0, 1);
        v.set(b.unit_index(), 0, field.one());
        v
    };
    if let Some(d0) = d.block(0) {
        if !d0.mul(&unit_vec).is_zero() {
            return Err(Error::math("unit of the DG-algebra is not a cocycle"));
        }
    }
    let z0 = match d.block(0) {
        Some(d0) => d0.kernel_basis(),
        None => Matrix::identity(field, dim0),
    };
    let cands = unit_vec.hstack(&z0);
    let (_, pivots) = cands.rref();
    let zmat = cands.select_columns(&pivots);

    // sub-space: full components below zero, the cocycles at zero
    let mut labels: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    for n in space.degrees().filter(|&n| n < 0) {
        labels.insert(n, space.labels_at(n));
    }
    if zmat.cols() > 0 {
        labels.insert(
            0,
            (0..zmat.cols())
                .map(|i| if i == 0 { Label::atom("1") } else { Label::atom(format!("z0_{i}")) })
                .collect(),
        );
    }
    let sub_space = GradedVectorSpace::with_labels(field, labels)?;

    // inclusion
    let mut incl_blocks = BTreeMap::new();
    for n in sub_space.degrees().collect::<Vec<_>>() {
        if n < 0 {
            incl_blocks.insert(n, Matrix::identity(field, space.dim(n)));
        } else {
            incl_blocks.insert(0, zmat.clone());
        }
    }
    let inclusion = GradedLinearMap::from_blocks(&sub_space, space, 0, incl_blocks)?;

    // restricted differential: unchanged below -1, reexpressed in the
    // cocycle basis at -1 (its image consists of cocycles by d^2 = 0)
    let mut d_blocks = BTreeMap::new();
    for n in sub_space.degrees().filter(|&n| n < -1) {
        if let Some(m) = d.block(n) {
            d_blocks.insert(n, m.clone());
        }
    }
    if sub_space.dim(-1) > 0 && sub_space.dim(0) > 0 {
        if let Some(m) = d.block(-1) {
            let coords = zmat
                .solve_matrix(m)?
                .ok_or_else(|| Error::internal("d(-1) image not inside the degree-0 cocycles"))?;
            d_blocks.insert(-1, coords);
        }
    }
    let sub_d = GradedLinearMap::from_blocks(&sub_space, &sub_space, 1, d_blocks)?;

    // restricted product via structure constants of B
    let pair_space = sub_space.tensor(&sub_space)?;
    let mut prod_blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    let sub_degs: Vec<i64> = sub_space.degrees().collect();
    for &n1 in &sub_degs {
        for &n2 in &sub_degs {
            let t = n1 + n2;
            if sub_space.dim(t) == 0 {
                continue;
            }
            let rows = sub_space.dim(t);
            let cols = pair_space.dim(t);
            let block = prod_blocks.entry(t).or_insert_with(|| Matrix::zeros(field, rows, cols));
            for i1 in 0..sub_space.dim(n1) {
                let x = inclusion.eval_basis(n1, i1);
                for i2 in 0..sub_space.dim(n2) {
                    let y = inclusion.eval_basis(n2, i2);
                    let xy = b.multiply(&x, &y)?;
                    // coordinates in the sub-basis
                    let coords = if t < 0 {
                        xy.coords
                    } else {
                        let rhs = Matrix::new(field, xy.coords.len(), 1, xy.coords)?;
                        zmat.solve_matrix(&rhs)?
                            .ok_or_else(|| Error::internal("degree-0 product is not a cocycle"))?
                            .column(0)
                    };
                    let col = mixed_rank(
                        &[&sub_space, &sub_space],
                        &[sub_space.global_of(n1, i1), sub_space.global_of(n2, i2)],
                    );
                    for (r, v) in coords.into_iter().enumerate() {
                        if !v.is_zero() {
                            block.set(r, col, v);
                        }
                    }
                }
            }
        }
    }
    let product = GradedLinearMap::from_blocks(&pair_space, &sub_space, 0, prod_blocks)?;

    let algebra = DGAlgebra::new(sub_space, sub_d, product, 0)?;

    let not_quasi_iso_warning = complex.h_dims().keys().any(|&n| n > 0);
    Ok(Truncation { algebra, inclusion, not_quasi_iso_warning })
}

/// A right DG-module over a graded algebra with differential: a complex
/// plus an action map satisfying the Leibniz rule and associativity.
#[derive(Clone, Debug)]
pub struct DgModule {
    complex: CochainComplex,
    algebra_space: GradedVectorSpace,
    /// action: M (x) A -> M, degree 0
    action: GradedLinearMap,
}

/// The algebra data a module is checked against: underlying space, product
/// as a map from the tensor square, the unit, and the differential.
pub struct AlgebraData<'a> {
    pub space: &'a GradedVectorSpace,
    pub product: &'a GradedLinearMap,
    pub unit: Element,
    pub differential: GradedLinearMap,
}

impl DgModule {
    pub fn new(
        complex: CochainComplex,
        algebra: &AlgebraData<'_>,
        action: GradedLinearMap,
    ) -> Result<DgModule> {
        let m_space = complex.space().clone();
        let a_space = algebra.space;
        let field = m_space.field();
        let expected_src = m_space.tensor(a_space)?;
        if action.degree() != 0 || action.source().dims() != expected_src.dims() {
            return Err(Error::dimension("module action has wrong shape"));
        }
        let module = DgModule { complex, algebra_space: a_space.clone(), action };
        // unit acts as the identity
        let m_degs: Vec<i64> = module.complex.space().degrees().collect();
        for &n in &m_degs {
            for i in 0..module.complex.space().dim(n) {
                let x = Element::basis(module.complex.space(), n, i);
                let xu = module.act(&x, &algebra.unit)?;
                if xu != x {
                    return Err(Error::math(format!(
                        "module action not unital at degree {n}, index {i}"
                    )));
                }
            }
        }
        // Leibniz: d(x a) = d(x) a + (-1)^{|x|} x d(a)
        let a_degs: Vec<i64> = a_space.degrees().collect();
        for &nm in &m_degs {
            for im in 0..module.complex.space().dim(nm) {
                let x = Element::basis(module.complex.space(), nm, im);
                let dx = module.complex.d().eval(&x);
                for &na in &a_degs {
                    for ia in 0..a_space.dim(na) {
                        let a = Element::basis(a_space, na, ia);
                        let da = algebra.differential.eval(&a);
                        let lhs = module.complex.d().eval(&module.act(&x, &a)?);
                        let sign = if nm.rem_euclid(2) == 0 { 1 } else { -1 };
                        let rhs = module
                            .act(&dx, &a)?
                            .add(&module.act(&x, &da)?.scale(&field.from_integer(sign)));
                        if lhs != rhs {
                            return Err(Error::math(format!(
                                "module Leibniz rule fails on ({nm},{im})*({na},{ia})"
                            )));
                        }
                    }
                }
            }
        }
        // associativity on basis triples
        for &nm in &m_degs {
            for im in 0..module.complex.space().dim(nm) {
                let x = Element::basis(module.complex.space(), nm, im);
                for &na in &a_degs {
                    for ia in 0..a_space.dim(na) {
                        let a = Element::basis(a_space, na, ia);
                        let xa = module.act(&x, &a)?;
                        for &nb in &a_degs {
                            for ib in 0..a_space.dim(nb) {
                                let b_el = Element::basis(a_space, nb, ib);
                                let left = module.act(&xa, &b_el)?;
                                let ab = eval_pair(algebra.product, a_space, a_space, &a, &b_el)?;
                                let right = module.act(&x, &ab)?;
                                if left != right {
                                    return Err(Error::math(format!(
                                        "module associativity fails on ({nm},{im}),({na},{ia}),({nb},{ib})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(module)
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn action(&self) -> &GradedLinearMap {
        &self.action
    }

    pub fn algebra_space(&self) -> &GradedVectorSpace {
        &self.algebra_space
    }

    /// `x . a` for homogeneous elements.
    pub fn act(&self, x: &Element, a: &Element) -> Result<Element> {
        eval_pair(&self.action, self.complex.space(), &self.algebra_space, x, a)
    }
}

/// Evaluates a map defined on `V (x) W` on a pair of homogeneous elements.
/// The map is a single slot, so no Koszul sign is involved.
pub fn eval_pair(
    map: &GradedLinearMap,
    v: &GradedVectorSpace,
    w: &GradedVectorSpace,
    x: &Element,
    y: &Element,
) -> Result<Element> {
    let out_deg = x.degree + y.degree + map.degree();
    let out_dim = map.target().dim(out_deg);
    let field = v.field();
    let mut out = Element::zero(field, out_deg, out_dim);
    let block = match map.block(x.degree + y.degree) {
        Some(b) => b,
        None => return Ok(out),
    };
    for (i, cx) in x.coords.iter().enumerate() {
        if cx.is_zero() {
            continue;
        }
        for (j, cy) in y.coords.iter().enumerate() {
            if cy.is_zero() {
                continue;
            }
            let col = mixed_rank(&[v, w], &[v.global_of(x.degree, i), w.global_of(y.degree, j)]);
            let coeff = cx.mul(cy);
            for r in 0..out_dim {
                let e = block.at(r, col);
                if !e.is_zero() {
                    out.coords[r] = out.coords[r].add(&e.mul(&coeff));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    const Q: Field = Field::Rational;

    fn two_term(rows: &[&[i64]], lo: i64) -> CochainComplex {
        // complex concentrated in degrees lo, lo+1 with the given matrix
        let m = Matrix::from_int_rows(Q, rows);
        let space = GradedVectorSpace::from_dims(Q, &[(lo, m.cols()), (lo + 1, m.rows())]);
        let mut blocks = BTreeMap::new();
        blocks.insert(lo, m);
        let d = GradedLinearMap::from_blocks(&space, &space, 1, blocks).unwrap();
        CochainComplex::new(space, d).unwrap()
    }

    #[test]
    fn d_squared_checked() {
        let space = GradedVectorSpace::from_dims(Q, &[(0, 1), (1, 1), (2, 1)]);
        let mut blocks = BTreeMap::new();
        blocks.insert(0, Matrix::from_int_rows(Q, &[&[1]]));
        blocks.insert(1, Matrix::from_int_rows(Q, &[&[1]]));
        let d = GradedLinearMap::from_blocks(&space, &space, 1, blocks).unwrap();
        assert!(matches!(CochainComplex::new(space, d), Err(Error::Math(_))));
    }

    #[test]
    fn cohomology_of_acyclic_two_term() {
        // 0 -> k -(id)-> k -> 0
        let c = two_term(&[&[1]], 0);
        let data = cohomology(&c).unwrap();
        assert_eq!(data.h.total_dim(), 0);
    }

    #[test]
    fn cohomology_of_zero_differential() {
        let space = GradedVectorSpace::from_dims(Q, &[(-1, 2), (0, 1)]);
        let c = CochainComplex::with_zero_differential(space.clone());
        let data = cohomology(&c).unwrap();
        assert_eq!(data.h.dims(), space.dims());
        assert!(data.homotopy.is_zero());
    }

    #[test]
    fn cohomology_of_dual_numbers_complex() {
        // k[e]/e^2 in degree 0 with d = 0: H is the whole 2-dim space
        let space = GradedVectorSpace::from_dims(Q, &[(0, 2)]);
        let c = CochainComplex::with_zero_differential(space);
        let data = cohomology(&c).unwrap();
        assert_eq!(data.h.dim(0), 2);
    }

    #[test]
    fn cohomology_splitting_on_mixed_complex() {
        // rank-1 differential on a 2|2 complex leaves 1-dim H on both ends
        let c = two_term(&[&[1, 0], &[0, 0]], 0);
        let data = cohomology(&c).unwrap();
        assert_eq!(data.h.dim(0), 1);
        assert_eq!(data.h.dim(1), 1);
    }

    #[test]
    fn preferred_cocycle_comes_first() {
        let space = GradedVectorSpace::from_dims(Q, &[(0, 2)]);
        let c = CochainComplex::with_zero_differential(space.clone());
        let mut pref = Element::zero(Q, 0, 2);
        pref.coords[1] = Q.one();
        let data = cohomology_with_preferred(&c, &[pref.clone()]).unwrap();
        assert_eq!(data.incl.eval_basis(0, 0), pref);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = two_term(&[&[0, 1]], -1);
        let id = GradedLinearMap::identity(c.space());
        let cone = mapping_cone(&id, &c, &c).unwrap();
        assert!(cone.cone.is_acyclic());
    }

    #[test]
    fn cone_of_zero_is_sum_of_shift_and_target() {
        let c = two_term(&[&[1]], 0);
        let d = two_term(&[&[2]], 0);
        let z = GradedLinearMap::zero(c.space(), d.space(), 0);
        let cone = mapping_cone(&z, &c, &d).unwrap();
        let mut expected = BTreeMap::new();
        for (&k, &v) in c.space().shift(1).dims() {
            *expected.entry(k).or_insert(0) += v;
        }
        for (&k, &v) in d.space().dims() {
            *expected.entry(k).or_insert(0) += v;
        }
        assert_eq!(cone.cone.space().dims(), &expected);
        assert!(cone.cone.is_acyclic());
    }

    #[test]
    fn cone_of_epsilon_multiplication() {
        // mult by e on k[e]/e^2 (degree 0, d = 0): H(cone) = {-1: 1, 0: 1}
        let space = GradedVectorSpace::from_dims(Q, &[(0, 2)]);
        let c = CochainComplex::with_zero_differential(space.clone());
        let mut blocks = BTreeMap::new();
        // basis (1, e): e*1 = e, e*e = 0
        blocks.insert(0, Matrix::from_int_rows(Q, &[&[0, 0], &[1, 0]]));
        let f = GradedLinearMap::from_blocks(&space, &space, 0, blocks).unwrap();
        let cone = mapping_cone(&f, &c, &c).unwrap();
        let h = cone.cone.h_dims();
        assert_eq!(h.get(&-1), Some(&1));
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn quasi_iso_identity_and_zero() {
        let c = two_term(&[&[0]], 0);
        let id = GradedLinearMap::identity(c.space());
        assert!(quasi_iso_check(&id, &c, &c).unwrap());
        let z = GradedLinearMap::zero(c.space(), c.space(), 0);
        assert!(!quasi_iso_check(&z, &c, &c).unwrap());
    }

    #[test]
    fn quasi_iso_agrees_with_h_dims_and_rank() {
        // compare the cone route with the induced-map route
        let c = two_term(&[&[1, 0]], 0);
        let d = two_term(&[&[0, 0]], 0);
        for f in [
            GradedLinearMap::zero(c.space(), d.space(), 0),
            GradedLinearMap::identity(c.space()),
        ] {
            if !is_chain_map(&f, &c, &d) {
                continue;
            }
            let via_cone = quasi_iso_check(&f, &c, &d).unwrap();
            let hc = cohomology(&c).unwrap();
            let hd = cohomology(&d).unwrap();
            let induced = hd.proj.compose(&f).compose(&hc.incl);
            let full_rank = hc.h.dims() == hd.h.dims()
                && hc.h.degrees().all(|n| {
                    induced.block(n).map_or(hc.h.dim(n) == 0, |m| m.rank() == hc.h.dim(n))
                });
            assert_eq!(via_cone, full_rank);
        }
    }
}
