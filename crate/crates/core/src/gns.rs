//! The GNS construction for finite-dimensional concrete *-algebras, the
//! generalized Schwartz inequality, the observable norm and the splitting of a
//! self-adjoint element into positive parts.
//!
//! Vectors are indexed by algebra elements through `|a⟩`, with the form
//! `⟨b|a⟩ = r(ba*)` and `π(b)|a⟩ = |ab*⟩`. The ket map `a ↦ |a⟩` is
//! antilinear, so `|Σ cⱼaⱼ⟩` has coordinates `conj(c)` over the basis kets and
//! the Hilbert inner product on coordinates is `(u, v) = v* G u` with
//! `G[j][k] = r(aⱼ aₖ*)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{
    distance, hermitian_eigen, psd_pseudo_inverse, rank_decomposition, ComplexMatrix, ToleranceConfig, C64,
};
use crate::random;
use crate::report::VerificationReport;

/// A linear span of `dim × dim` matrices with a labeled spanning list.
#[derive(Debug, Clone)]
pub struct ConcreteStarAlgebra {
    dim: usize,
    basis: Vec<(String, ComplexMatrix)>,
    unit: (String, ComplexMatrix),
    idempotents: Vec<(String, ComplexMatrix)>,
    span: SpanCoordinates,
}

/// Least-squares coordinates over a possibly dependent spanning list.
#[derive(Debug, Clone)]
struct SpanCoordinates {
    /// Vectorized basis, `dim² × n`.
    m: ComplexMatrix,
    /// `(M*M)⁺ M*`.
    solve: ComplexMatrix,
    rank: usize,
}

impl SpanCoordinates {
    fn new(dim: usize, basis: &[(String, ComplexMatrix)], tol: &ToleranceConfig) -> Result<Self> {
        let cols: Vec<Vec<C64>> = basis.iter().map(|(_, a)| a.data().to_vec()).collect();
        let m = ComplexMatrix::from_columns(dim * dim, &cols);
        let mstar = m.adjoint();
        let gram = &mstar * &m;
        let rank = rank_decomposition(&gram, tol)?.rank;
        let solve = &psd_pseudo_inverse(&gram, tol)? * &mstar;
        Ok(SpanCoordinates { m, solve, rank })
    }

    fn coords(&self, x: &ComplexMatrix) -> Vec<C64> {
        self.solve.apply(x.data())
    }

    /// Distance from `x` to the span, in Frobenius norm.
    fn residual(&self, x: &ComplexMatrix) -> f64 {
        let back = self.m.apply(&self.coords(x));
        back.iter().zip(x.data()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

impl ConcreteStarAlgebra {
    /// `idempotents` lists the declared logic; the unit is always a candidate too.
    pub fn new(
        basis: Vec<(String, ComplexMatrix)>,
        unit: (String, ComplexMatrix),
        idempotents: Vec<(String, ComplexMatrix)>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let dim = unit.1.rows();
        if basis.is_empty() {
            return Err(Error::Structural("an algebra needs a nonempty basis".into()));
        }
        for (l, a) in basis.iter().chain(&idempotents).chain(std::iter::once(&unit)) {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::Structural(format!(
                    "matrix {l} is {}x{}, expected {dim}x{dim}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        for (i, (l, _)) in basis.iter().enumerate() {
            if basis[..i].iter().any(|(x, _)| x == l) {
                return Err(Error::Structural(format!("duplicate basis label {l}")));
            }
        }
        let span = SpanCoordinates::new(dim, &basis, tol)?;
        Ok(ConcreteStarAlgebra {
            dim,
            basis,
            unit,
            idempotents,
            span,
        })
    }

    /// All of `M_d`, spanned by the matrix units `E{j}{k}`, with the
    /// diagonal units declared as idempotents.
    pub fn full_matrix_algebra(d: usize) -> Self {
        let unit_matrix = |j: usize, k: usize| {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = C64::new(1.0, 0.0);
            m
        };
        let mut basis = Vec::new();
        for j in 0..d {
            for k in 0..d {
                basis.push((format!("E{j}{k}"), unit_matrix(j, k)));
            }
        }
        let idem = (0..d).map(|j| (format!("E{j}{j}"), unit_matrix(j, j))).collect();
        ConcreteStarAlgebra::new(basis, ("I".into(), ComplexMatrix::identity(d)), idem, &ToleranceConfig::default())
            .expect("matrix units are well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[(String, ComplexMatrix)] {
        &self.basis
    }

    pub fn unit(&self) -> &(String, ComplexMatrix) {
        &self.unit
    }

    pub fn idempotents(&self) -> &[(String, ComplexMatrix)] {
        &self.idempotents
    }

    /// Dimension of the span of the basis.
    pub fn span_dim(&self) -> usize {
        self.span.rank
    }

    /// Coordinates of `x` over the basis (minimal norm when the basis is dependent).
    pub fn coords(&self, x: &ComplexMatrix) -> Vec<C64> {
        self.span.coords(x)
    }

    pub fn span_residual(&self, x: &ComplexMatrix) -> f64 {
        self.span.residual(x)
    }

    /// Unit first, then the declared idempotents.
    fn candidates(&self) -> impl Iterator<Item = &(String, ComplexMatrix)> {
        std::iter::once(&self.unit).chain(&self.idempotents)
    }

    fn combine(&self, c: &[C64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (ck, (_, a)) in c.iter().zip(&self.basis) {
            out = &out + &a.scale(*ck);
        }
        out
    }
}

/// Closure under adjoint and product within the span, and the unit laws.
pub fn verify_algebra(alg: &ConcreteStarAlgebra, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new("*-algebra");
    let (ul, e) = &alg.unit;
    let r = e.hermitian_residual().max(distance(&(e * e), e));
    report
        .check("algebra.unit_projection")
        .expect(r <= tol.eps, || (vec![ul.clone()], format!("e is not a self-adjoint idempotent (residual {r:.3e})")));
    {
        let chk = report.check("algebra.unit_absorbs");
        for (l, a) in &alg.basis {
            let r = distance(&(e * a), a).max(distance(&(a * e), a));
            chk.expect(r <= tol.eps, || (vec![l.clone()], format!("‖ea - a‖ or ‖ae - a‖ = {r:.3e}")));
        }
    }
    {
        let chk = report.check("algebra.adjoint_closed");
        for (l, a) in &alg.basis {
            let r = alg.span_residual(&a.adjoint());
            chk.expect(r <= tol.eps, || (vec![l.clone()], format!("a* is {r:.3e} away from the span")));
        }
    }
    {
        let chk = report.check("algebra.product_closed");
        for (la, a) in &alg.basis {
            for (lb, b) in &alg.basis {
                let r = alg.span_residual(&(a * b));
                chk.expect(r <= tol.eps, || {
                    (vec![la.clone(), lb.clone()], format!("ab is {r:.3e} away from the span"))
                });
            }
        }
    }
    {
        let chk = report.check("algebra.idempotents");
        for (l, p) in alg.candidates() {
            let r = p
                .hermitian_residual()
                .max(distance(&(p * p), p))
                .max(alg.span_residual(p));
            chk.expect(r <= tol.eps, || {
                (vec![l.clone()], format!("not a self-adjoint idempotent of the span (residual {r:.3e})"))
            });
        }
    }
    report.note("span_dim", alg.span_dim());
    report
}

/// A linear functional on the algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraState {
    /// `r(a) = tr(ρa)`.
    Density(ComplexMatrix),
    /// Values `r(basisₖ)`, extended linearly.
    Functional(Vec<C64>),
}

fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

impl AlgebraState {
    pub fn eval(&self, alg: &ConcreteStarAlgebra, x: &ComplexMatrix) -> C64 {
        match self {
            AlgebraState::Density(rho) => trace_product(rho, x),
            AlgebraState::Functional(values) => alg.coords(x).iter().zip(values).map(|(c, v)| c * v).sum(),
        }
    }

    fn check_shape(&self, alg: &ConcreteStarAlgebra) -> Result<()> {
        match self {
            AlgebraState::Density(rho) if rho.rows() != alg.dim || rho.cols() != alg.dim => Err(Error::Structural(
                format!("density matrix is {}x{}, algebra acts on dimension {}", rho.rows(), rho.cols(), alg.dim),
            )),
            AlgebraState::Functional(v) if v.len() != alg.basis.len() => Err(Error::Structural(format!(
                "{} functional values for {} basis elements",
                v.len(),
                alg.basis.len()
            ))),
            _ => Ok(()),
        }
    }
}

/// `G[j][k] = r(aⱼ aₖ*)`.
pub fn state_gram(alg: &ConcreteStarAlgebra, r: &AlgebraState) -> ComplexMatrix {
    let n = alg.basis.len();
    let adj: Vec<ComplexMatrix> = alg.basis.iter().map(|(_, a)| a.adjoint()).collect();
    let mut g = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            g[(j, k)] = r.eval(alg, &(&alg.basis[j].1 * &adj[k]));
        }
    }
    g
}

/// Hermiticity, positivity of the Gram form, consistency over linear
/// dependencies, and `r(e) = 1` for some declared idempotent.
pub fn verify_state(alg: &ConcreteStarAlgebra, r: &AlgebraState, tol: &ToleranceConfig) -> Result<VerificationReport> {
    r.check_shape(alg)?;
    let mut report = VerificationReport::new("algebra state");
    if let AlgebraState::Functional(values) = r {
        let chk = report.check("state.well_defined");
        for (k, (l, a)) in alg.basis.iter().enumerate() {
            let v = r.eval(alg, a);
            let d = (v - values[k]).norm();
            chk.expect(d <= tol.eps, || {
                (vec![l.clone()], format!("value {} conflicts with the linear relations ({v})", values[k]))
            });
        }
    }
    {
        let chk = report.check("state.hermitian");
        for (l, a) in &alg.basis {
            let d = (r.eval(alg, &a.adjoint()) - r.eval(alg, a).conj()).norm();
            chk.expect(d <= tol.eps, || (vec![l.clone()], format!("|r(a*) - conj r(a)| = {d:.3e}")));
        }
    }
    let g = state_gram(alg, r);
    let e = hermitian_eigen(&g)?;
    let min = e.values.first().copied().unwrap_or(0.0);
    report.check("state.positive").expect(min >= -tol.eps, || {
        let v = e.vectors.column(0);
        let x = alg.combine(&v.iter().map(|z| z.conj()).collect::<Vec<_>>());
        let coeffs: Vec<String> = alg.coords(&x).iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
        (coeffs, format!("r(aa*) = {min:.3e} for the element with these basis coefficients"))
    });
    let (best, value) = alg
        .candidates()
        .map(|(l, p)| (l.clone(), r.eval(alg, p).re))
        .fold((String::new(), f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    report
        .check("state.normalized")
        .expect((value - 1.0).abs() <= tol.eps, || (vec![best.clone()], format!("sup r(e) = {value}")));
    report.note("gram_min_eigenvalue", min);
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GnsResiduals {
    pub reconstruction: f64,
    pub multiplicativity: f64,
    pub adjoint: f64,
    pub well_defined: f64,
    /// `max |r(a) - r(e₁ae₁)|`.
    pub e1_identity: f64,
}

#[derive(Debug, Clone)]
pub struct GnsResult {
    pub space_dim: usize,
    pub kernel_dim: usize,
    pub span_dim: usize,
    pub rep: Vec<(String, ComplexMatrix)>,
    pub cyclic: Vec<C64>,
    /// Label of the idempotent maximizing `r`.
    pub e1: String,
    pub gram: ComplexMatrix,
    pub residuals: GnsResiduals,
    pub report: VerificationReport,
}

struct Quotient {
    /// `Λ^{1/2} U*`, `rank × n`.
    t: ComplexMatrix,
    /// `U Λ^{-1/2}`, `n × rank`.
    t_pinv: ComplexMatrix,
}

impl Quotient {
    fn ket(&self, alg: &ConcreteStarAlgebra, x: &ComplexMatrix) -> Vec<C64> {
        let u: Vec<C64> = alg.coords(x).iter().map(|z| z.conj()).collect();
        self.t.apply(&u)
    }

    /// Matrix of `|a⟩ ↦ |ax*⟩` on basis coordinates.
    fn lift(&self, alg: &ConcreteStarAlgebra, x: &ComplexMatrix) -> ComplexMatrix {
        let xs = x.adjoint();
        let cols: Vec<Vec<C64>> = alg
            .basis
            .iter()
            .map(|(_, a)| alg.coords(&(a * &xs)).iter().map(|z| z.conj()).collect())
            .collect();
        ComplexMatrix::from_columns(alg.basis.len(), &cols)
    }

    fn rep(&self, alg: &ConcreteStarAlgebra, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.t * &self.lift(alg, x)) * &self.t_pinv
    }

    /// How far the lift of `x` moves the Gram kernel out of itself.
    fn kernel_leak(&self, alg: &ConcreteStarAlgebra, x: &ComplexMatrix) -> f64 {
        let n = alg.basis.len();
        let kernel_proj = &ComplexMatrix::identity(n) - &(&self.t_pinv * &self.t);
        (&(&self.t * &self.lift(alg, x)) * &kernel_proj).op_norm()
    }
}

pub fn gns_construct(alg: &ConcreteStarAlgebra, r: &AlgebraState, tol: &ToleranceConfig) -> Result<GnsResult> {
    let algebra_report = verify_algebra(alg, tol);
    if let Some((axiom, v)) = algebra_report.first_violation() {
        return Err(Error::axiom(axiom, format!("at ({}): {}", v.witness.join(", "), v.detail)));
    }
    let state_report = verify_state(alg, r, tol)?;
    if let Some((axiom, v)) = state_report.first_violation() {
        return Err(Error::InvalidState(format!("{axiom} fails at ({}): {}", v.witness.join(", "), v.detail)));
    }

    let gram = state_gram(alg, r);
    let dec = rank_decomposition(&gram, tol).map_err(|e| Error::InvalidState(e.to_string()))?;
    let inv_sqrt: Vec<f64> = dec.values.iter().map(|v| 1.0 / v.sqrt()).collect();
    let q = Quotient {
        t: dec.factor.adjoint(),
        t_pinv: ComplexMatrix::from_fn(dec.basis.rows(), dec.rank, |i, k| dec.basis[(i, k)] * inv_sqrt[k]),
    };

    let mut res = GnsResiduals::default();
    for (_, a) in &alg.basis {
        res.well_defined = res.well_defined.max(q.kernel_leak(alg, a));
    }
    if res.well_defined > tol.eps {
        return Err(Error::axiom(
            "gns.well_defined",
            format!("π(b) does not preserve the kernel of the form (leak {:.3e})", res.well_defined),
        ));
    }

    let (e1, e1m) = alg
        .candidates()
        .map(|(l, p)| (l, p, r.eval(alg, p).re))
        .fold(None::<(&String, &ComplexMatrix, f64)>, |acc, x| match acc {
            Some(a) if a.2 >= x.2 => Some(a),
            _ => Some(x),
        })
        .map(|(l, p, _)| (l.clone(), p.clone()))
        .expect("the unit is always a candidate");
    let cyclic = q.ket(alg, &e1m);

    let rep: Vec<(String, ComplexMatrix)> = alg.basis.iter().map(|(l, a)| (l.clone(), q.rep(alg, a))).collect();
    let mut report = VerificationReport::new("GNS representation");
    for (j, (lj, aj)) in alg.basis.iter().enumerate() {
        let pi = &rep[j].1;
        let value = r.eval(alg, aj);
        let recon = (value - ComplexMatrix::inner(&pi.apply(&cyclic), &cyclic)).norm();
        res.reconstruction = res.reconstruction.max(recon);
        report.check("gns.reconstruction").expect(recon <= tol.eps, || {
            (vec![lj.clone()], format!("|r(a) - (π(a)ξ₁, ξ₁)| = {recon:.3e}"))
        });
        let e1d = (value - r.eval(alg, &(&(&e1m * aj) * &e1m))).norm();
        res.e1_identity = res.e1_identity.max(e1d);
        report
            .check("gns.e1_identity")
            .expect(e1d <= tol.eps, || (vec![lj.clone()], format!("|r(a) - r(e₁ae₁)| = {e1d:.3e}")));
        let adj = distance(&q.rep(alg, &aj.adjoint()), &pi.adjoint());
        res.adjoint = res.adjoint.max(adj);
        report
            .check("gns.adjoint")
            .expect(adj <= tol.eps, || (vec![lj.clone()], format!("‖π(a*) - π(a)*‖ = {adj:.3e}")));
        for (k, (lk, ak)) in alg.basis.iter().enumerate() {
            let m = distance(&q.rep(alg, &(aj * ak)), &(pi * &rep[k].1));
            res.multiplicativity = res.multiplicativity.max(m);
            report.check("gns.multiplicative").expect(m <= tol.eps, || {
                (vec![lj.clone(), lk.clone()], format!("‖π(ab) - π(a)π(b)‖ = {m:.3e}"))
            });
        }
    }
    let span_dim = alg.span_dim();
    let kernel_dim = span_dim.saturating_sub(dec.rank);
    if kernel_dim == 0 {
        // A faithful state gives an injective representation on the span.
        let cols: Vec<Vec<C64>> = rep.iter().map(|(_, m)| m.data().to_vec()).collect();
        let mat = ComplexMatrix::from_columns(dec.rank * dec.rank, &cols);
        let rank = rank_decomposition(&(&mat.adjoint() * &mat), tol)?.rank;
        report.check("gns.injective").expect(rank == span_dim, || {
            (Vec::<String>::new(), format!("representation has rank {rank} on a span of dimension {span_dim}"))
        });
    }
    report.note("space_dim", dec.rank);
    report.note("kernel_dim", kernel_dim);
    report.note("e1", &e1);
    report.note("residuals", &res);
    report.note("tau_normality", "automatic in finite dimension");

    for (identity, value) in [
        ("π_r reproduces r on the cyclic vector", res.reconstruction),
        ("π_r is multiplicative", res.multiplicativity),
        ("π_r(a*) = π_r(a)*", res.adjoint),
    ] {
        if value > tol.eps {
            return Err(Error::Construction {
                identity: identity.into(),
                residual: value,
            });
        }
    }
    Ok(GnsResult {
        space_dim: dec.rank,
        kernel_dim,
        span_dim,
        rep,
        cyclic,
        e1,
        gram,
        residuals: res,
        report,
    })
}

fn normalized_sample(alg: &ConcreteStarAlgebra, rng: &mut random::QRng) -> ComplexMatrix {
    let c = random::complex_vector(rng, alg.basis.len());
    let x = alg.combine(&c);
    let n = x.frobenius_norm();
    if n > 0.0 { x.scale_re(1.0 / n) } else { x }
}

/// `|r(ba*)|² <= r(bb*) r(aa*)` on all basis pairs and on `samples` random
/// pairs of unit-Frobenius span elements. The smallest slack is recorded.
pub fn schwartz_check(
    alg: &ConcreteStarAlgebra,
    r: &AlgebraState,
    tol: &ToleranceConfig,
    samples: usize,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new("Schwartz inequality");
    let slack = |a: &ComplexMatrix, b: &ComplexMatrix| {
        let (ast, bst) = (a.adjoint(), b.adjoint());
        let lhs = r.eval(alg, &(b * &ast)).norm_sqr();
        let rhs = r.eval(alg, &(b * &bst)).re * r.eval(alg, &(a * &ast)).re;
        rhs - lhs
    };
    let mut min_slack = f64::INFINITY;
    for (la, a) in &alg.basis {
        for (lb, b) in &alg.basis {
            let s = slack(a, b);
            min_slack = min_slack.min(s);
            report
                .check("schwartz.basis_pairs")
                .expect(s >= -tol.eps, || (vec![la.clone(), lb.clone()], format!("slack {s:.3e}")));
        }
    }
    let mut rng = random::rng(seed);
    let mut sample_min = f64::INFINITY;
    for i in 0..samples {
        let a = normalized_sample(alg, &mut rng);
        let b = normalized_sample(alg, &mut rng);
        let s = slack(&a, &b);
        sample_min = sample_min.min(s);
        report
            .check("schwartz.random_pairs")
            .expect(s >= -tol.eps, || (vec![format!("sample {i}")], format!("slack {s:.3e}")));
    }
    report.check("schwartz.random_pairs");
    report.note("min_slack", min_slack.min(sample_min));
    report.note("samples", samples);
    report
}

/// `inf{r > 0 : re ± a > 0}` for a self-adjoint `a` absorbed by a declared
/// idempotent `e`, computed as the spectral radius of `a` on `range(e)`.
pub fn observable_norm(alg: &ConcreteStarAlgebra, a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<f64> {
    if !a.is_square() || a.rows() != alg.dim {
        return Err(Error::Domain(format!("element must be {0}x{0}", alg.dim)));
    }
    if !a.is_hermitian(tol) {
        return Err(Error::Domain("observable norm needs a self-adjoint element".into()));
    }
    let (_, e) = alg
        .candidates()
        .find(|(_, e)| distance(&(&(e * a) * e), a) <= tol.eps)
        .ok_or_else(|| Error::Domain("no declared idempotent e satisfies eae = a".into()))?;
    let range = rank_decomposition(e, tol)?.basis;
    if range.cols() == 0 {
        return Ok(0.0);
    }
    let restricted = &(&range.adjoint() * a) * &range;
    let eig = hermitian_eigen(&restricted)?;
    Ok(eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// `a± = ¼(a ± e)²` with the algebra unit `e`, so that `a = a₊ - a₋`.
pub fn positive_part_decomposition(
    alg: &ConcreteStarAlgebra,
    a: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_square() || a.rows() != alg.dim || !a.is_hermitian(tol) {
        return Err(Error::Domain("positive parts need a self-adjoint element of the algebra".into()));
    }
    let e = &alg.unit.1;
    if distance(&(e * a), a).max(distance(&(a * e), a)) > tol.eps {
        return Err(Error::Domain("the unit idempotent does not absorb the element".into()));
    }
    let plus = a + e;
    let minus = a - e;
    let ap = (&plus * &plus).scale_re(0.25);
    let am = (&minus * &minus).scale_re(0.25);
    let r = distance(&(&ap - &am), a);
    if r > tol.eps {
        return Err(Error::Internal(format!("a₊ - a₋ differs from a by {r:.3e}")));
    }
    Ok((ap, am))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn pure_m2() -> AlgebraState {
        AlgebraState::Density(ComplexMatrix::diag(&[1.0, 0.0]))
    }

    fn mixed(d: usize) -> AlgebraState {
        AlgebraState::Density(ComplexMatrix::identity(d).scale_re(1.0 / d as f64))
    }

    #[test]
    fn m2_dimensions() {
        let alg = ConcreteStarAlgebra::full_matrix_algebra(2);
        let g = gns_construct(&alg, &pure_m2(), &tol()).unwrap();
        assert_eq!((g.space_dim, g.kernel_dim, g.span_dim), (2, 2, 4));
        let g = gns_construct(&alg, &mixed(2), &tol()).unwrap();
        assert_eq!((g.space_dim, g.kernel_dim), (4, 0));
        assert!(g.report.is_valid(), "{}", g.report);
        assert!(g.report.axiom("gns.injective").is_some());
    }

    #[test]
    fn scalar_algebra() {
        let one = ComplexMatrix::identity(1);
        let alg = ConcreteStarAlgebra::new(vec![("1".into(), one.clone())], ("1".into(), one.clone()), vec![], &tol())
            .unwrap();
        let g = gns_construct(&alg, &AlgebraState::Functional(vec![C64::new(1.0, 0.0)]), &tol()).unwrap();
        assert_eq!(g.space_dim, 1);
        assert!(distance(&g.rep[0].1, &one) < 1e-15);
        assert!((g.cyclic[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn indefinite_state_is_invalid() {
        let alg = ConcreteStarAlgebra::full_matrix_algebra(2);
        let bad = AlgebraState::Density(ComplexMatrix::diag(&[1.5, -0.5]));
        assert!(matches!(gns_construct(&alg, &bad, &tol()), Err(Error::InvalidState(_))));
        let r = verify_state(&alg, &bad, &tol()).unwrap();
        assert!(r.violated("state.positive"));
    }

    #[test]
    fn random_states_reconstruct() {
        let mut rng = random::rng(11);
        for d in 2..=3 {
            let alg = ConcreteStarAlgebra::full_matrix_algebra(d);
            for rank in 1..=d {
                let rho = random::density_matrix(&mut rng, d, rank);
                let g = gns_construct(&alg, &AlgebraState::Density(rho), &tol()).unwrap();
                assert_eq!(g.space_dim, d * rank);
                assert!(g.residuals.reconstruction < 1e-12);
            }
        }
    }

    #[test]
    fn functional_states_match_densities() {
        let alg = ConcreteStarAlgebra::full_matrix_algebra(2);
        let rho = random::density_matrix(&mut random::rng(2), 2, 2);
        let values = alg.basis().iter().map(|(_, a)| trace_product(&rho, a)).collect();
        let f = gns_construct(&alg, &AlgebraState::Functional(values), &tol()).unwrap();
        let d = gns_construct(&alg, &AlgebraState::Density(rho), &tol()).unwrap();
        assert_eq!(f.space_dim, d.space_dim);
        assert!(distance(&f.gram, &d.gram) < 1e-14);
    }

    #[test]
    fn schwartz() {
        let alg = ConcreteStarAlgebra::full_matrix_algebra(2);
        for r in [pure_m2(), mixed(2)] {
            let rep = schwartz_check(&alg, &r, &tol(), 200, 1);
            assert!(rep.is_valid(), "{rep}");
            assert!(rep.info["min_slack"].as_f64().unwrap() >= -1e-12);
        }
        // With a pure state, E11 spans part of the kernel: both sides vanish.
        let e11 = &alg.basis()[3].1;
        let e01 = &alg.basis()[1].1;
        let r = pure_m2();
        assert_eq!(r.eval(&alg, &(e11 * &e11.adjoint())).norm(), 0.0);
        assert_eq!(r.eval(&alg, &(e01 * &e11.adjoint())).norm(), 0.0);
    }

    #[test]
    fn observable_norms() {
        let alg = ConcreteStarAlgebra::full_matrix_algebra(2);
        let t = tol();
        assert_eq!(observable_norm(&alg, &ComplexMatrix::diag(&[2.0, -3.0]), &t).unwrap(), 3.0);
        assert_eq!(observable_norm(&alg, &ComplexMatrix::zeros(2, 2), &t).unwrap(), 0.0);
        let p = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!((observable_norm(&alg, &p, &t).unwrap() - 1.0).abs() < 1e-14);
        let skew = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(observable_norm(&alg, &skew, &t), Err(Error::Domain(_))));
    }

    #[test]
    fn positive_parts() {
        let alg = ConcreteStarAlgebra::full_matrix_algebra(2);
        let t = tol();
        let id = ComplexMatrix::identity(2);
        let (ap, am) = positive_part_decomposition(&alg, &id, &t).unwrap();
        assert!(distance(&ap, &id) < 1e-15 && am.max_abs() < 1e-15);
        let (ap, am) = positive_part_decomposition(&alg, &ComplexMatrix::zeros(2, 2), &t).unwrap();
        assert!(distance(&ap, &id.scale_re(0.25)) < 1e-15 && distance(&am, &id.scale_re(0.25)) < 1e-15);
        let (ap, am) = positive_part_decomposition(&alg, &ComplexMatrix::diag(&[1.0, -1.0]), &t).unwrap();
        assert!(distance(&ap, &ComplexMatrix::diag(&[1.0, 0.0])) < 1e-15);
        assert!(distance(&am, &ComplexMatrix::diag(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn non_closed_basis_is_rejected() {
        let t = tol();
        let e01 = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let alg = ConcreteStarAlgebra::new(
            vec![("I".into(), ComplexMatrix::identity(2)), ("E01".into(), e01)],
            ("I".into(), ComplexMatrix::identity(2)),
            vec![],
            &t,
        )
        .unwrap();
        let rep = verify_algebra(&alg, &t);
        assert!(rep.violated("algebra.adjoint_closed"));
        assert!(matches!(gns_construct(&alg, &mixed(2), &t), Err(Error::AxiomViolation { .. })));
    }
}
