//! Dorfman connections built from ordinary connections.

use super::{DorfmanConnection, PreDual};
use crate::algebroid::AnchoredBracket;
use crate::bundle::cartan::{apply_vf, vf_bracket};
use crate::bundle::{Mat, Section};
use crate::symkernel::{PolyError, Ring};

/// A connection on a trivial rank-`r` bundle `E`, stored as
/// `gamma[i][j] = ∇_{∂_i} ε_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Christoffel {
    ring: Ring,
    rank: usize,
    gamma: Vec<Vec<Section>>,
}

impl Christoffel {
    pub fn new(ring: &Ring, rank: usize, gamma: Vec<Vec<Section>>) -> Christoffel {
        assert_eq!(gamma.len(), ring.len(), "one row per coordinate direction");
        assert!(gamma.iter().all(|row| row.len() == rank && row.iter().all(|s| s.len() == rank)));
        Christoffel { ring: ring.clone(), rank, gamma }
    }

    pub fn flat(ring: &Ring, rank: usize) -> Christoffel {
        Christoffel::new(ring, rank, vec![vec![Section::zero(ring, rank); rank]; ring.len()])
    }

    /// `rows[i]` holds `rank²` strings: the components of `∇_{∂_i} ε_0`,
    /// then those of `∇_{∂_i} ε_1`, and so on.
    pub fn parse(ring: &Ring, rank: usize, rows: &[&[&str]]) -> Result<Christoffel, PolyError> {
        let mut gamma = Vec::new();
        for row in rows {
            let mut out = Vec::new();
            for j in 0..rank {
                let comps: Vec<&str> = row[j * rank..(j + 1) * rank].to_vec();
                out.push(Section::parse(ring, &comps)?);
            }
            gamma.push(out);
        }
        Ok(Christoffel::new(ring, rank, gamma))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gamma(&self, i: usize, j: usize) -> &Section {
        &self.gamma[i][j]
    }

    /// `∇_X e = Σ_i X^i (∂_i e + Σ_j e_j Γ_ij)`.
    pub fn covariant(&self, x: &Section, e: &Section) -> Section {
        let mut out: Section = Section::new(&self.ring, e.comps().iter().map(|c| apply_vf(x, c)).collect());
        for (i, xi) in x.comps().iter().enumerate() {
            for (j, ej) in e.comps().iter().enumerate() {
                if !xi.is_zero() && !ej.is_zero() {
                    out = &out + &self.gamma[i][j].scale(&(xi * ej));
                }
            }
        }
        out
    }

    /// `⟨∇*_X ξ, ε_k⟩ = X⟨ξ, ε_k⟩ − ⟨ξ, ∇_X ε_k⟩`.
    pub fn dual_covariant(&self, x: &Section, xi: &Section) -> Section {
        let comps = (0..self.rank)
            .map(|k| &apply_vf(x, xi.get(k)) - &xi.dot(&self.covariant(x, &Section::unit(&self.ring, self.rank, k))))
            .collect();
        Section::new(&self.ring, comps)
    }

    /// `R_∇(X,Y) e`.
    pub fn curvature(&self, x: &Section, y: &Section, e: &Section) -> Section {
        let a = self.covariant(x, &self.covariant(y, e));
        let b = self.covariant(y, &self.covariant(x, e));
        let c = self.covariant(&vf_bracket(x, y), e);
        &(&a - &b) - &c
    }
}

/// `Δ_{(X,ξ)}(e,θ) = (∇_X e, ℒ_X θ + ⟨∇*_· ξ, e⟩)`.
///
/// Frame symbols: `Δ_{∂_i} ε_j = (Γ_ij, 0)`, `Δ_{ε*_k} ε_j = (0, −Σ_m Γ_mj^k dx_m)`,
/// and the symbols on `dx_m` vanish.
pub fn standard_dorfman(nabla: &Christoffel) -> DorfmanConnection {
    let ring = nabla.ring();
    let (n, r) = (ring.len(), nabla.rank());
    let b = r + n;
    let mut symbols = vec![vec![Section::zero(ring, b); b]; n + r];
    for i in 0..n {
        for j in 0..r {
            symbols[i][j] = nabla.gamma(i, j).concat(&Section::zero(ring, n));
        }
    }
    for k in 0..r {
        for j in 0..r {
            let form = Section::new(ring, (0..n).map(|m| -nabla.gamma(m, j).get(k)).collect());
            symbols[n + k][j] = Section::zero(ring, r).concat(&form);
        }
    }
    DorfmanConnection::from_symbols(PreDual::canonical(ring, r), symbols).expect("canonical pairing is nondegenerate")
}

/// `Δ_{(X,ξ)}(e,θ) = (∇_X e, ℒ_X(θ − σe) + ⟨∇*_·(σ*X + ξ), e⟩ + σ(∇_X e))`
/// for a bundle map `σ: E → T*M` given as an `n × r` matrix, so that
/// `σ(ε_k) = Σ_m sigma[m][k] dx_m`.
pub fn im_form_dorfman(nabla: &Christoffel, sigma: &Mat) -> DorfmanConnection {
    let ring = nabla.ring();
    let (n, r) = (ring.len(), nabla.rank());
    assert!(sigma.rows == n && sigma.cols == r, "sigma must be n x r");
    let base = standard_dorfman(nabla);
    let mut symbols = base.symbols().clone();
    for i in 0..n {
        for j in 0..r {
            let form = (0..n)
                .map(|m| {
                    let mut c = &sigma.entries[i][j].partial(m) - &sigma.entries[m][j].partial(i);
                    for k in 0..r {
                        c -= &(&sigma.entries[i][k] * nabla.gamma(m, j).get(k));
                        c += &(&sigma.entries[m][k] * nabla.gamma(i, j).get(k));
                    }
                    c
                })
                .collect();
            let extra = Section::zero(ring, r).concat(&Section::new(ring, form));
            symbols[i][j] = &symbols[i][j] + &extra;
        }
    }
    DorfmanConnection::from_symbols(PreDual::canonical(ring, r), symbols).expect("canonical pairing is nondegenerate")
}

/// Zero pairing and `d_B`: any `Q`-connection on `B` given by its frame
/// symbols is a Dorfman connection.
pub fn trivial_dorfman(bracket: AnchoredBracket, symbols: Vec<Vec<Section>>) -> DorfmanConnection {
    let b_rank = symbols.first().map_or(0, |row| row.len());
    let pd = PreDual::trivial(bracket.ring(), bracket.anchor().clone(), b_rank);
    DorfmanConnection::new(pd, bracket, symbols).expect("shapes follow the bracket")
}

/// `R_Δ((X,ξ),(Y,η))(e,θ) = (R_∇(X,Y)e, ⟨R_{∇*}(X,·)η − R_{∇*}(Y,·)ξ, e⟩)`
/// computed from `∇` alone, as a `B → B` matrix.
///
/// The argument order inside the `∇*` curvatures is the one forced by the
/// Jacobiator identity; with the slots swapped the form part changes sign.
pub fn standard_curvature_closed_form(nabla: &Christoffel, v1: &Section, v2: &Section) -> Mat {
    let ring = nabla.ring();
    let (n, r) = (ring.len(), nabla.rank());
    let (x, xi) = (v1.slice(0, n), v1.slice(n, n + r));
    let (y, eta) = (v2.slice(0, n), v2.slice(n, n + r));
    let mut cols = Vec::with_capacity(r + n);
    for j in 0..r {
        let e = Section::unit(ring, r, j);
        let top = nabla.curvature(&x, &y, &e);
        // ⟨R_{∇*}(X,Z)η, e⟩ = −⟨η, R_∇(X,Z)e⟩ = ⟨η, R_∇(Z,X)e⟩
        let form = (0..n)
            .map(|m| {
                let dm = Section::unit(ring, n, m);
                &eta.dot(&nabla.curvature(&dm, &x, &e)) - &xi.dot(&nabla.curvature(&dm, &y, &e))
            })
            .collect();
        cols.push(top.concat(&Section::new(ring, form)));
    }
    for _ in 0..n {
        cols.push(Section::zero(ring, r + n));
    }
    Mat::from_columns(ring, r + n, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::battery::{Battery, DEFAULT_SEED};

    fn ex_a_nabla() -> Christoffel {
        Christoffel::parse(&Ring::numbered("x", 2), 1, &[&["0"], &["x1"]]).unwrap()
    }

    #[test]
    fn dual_bracket_matches_the_closed_formula() {
        let nabla = ex_a_nabla();
        let delta = standard_dorfman(&nabla);
        let ring = nabla.ring().clone();
        let b = Battery::new(&ring, DEFAULT_SEED);
        for t in b.tuples(&[3, 3]) {
            let (v, w) = (&t[0], &t[1]);
            let top = vf_bracket(&v.slice(0, 2), &w.slice(0, 2));
            let bottom = &nabla.dual_covariant(&v.slice(0, 2), &w.slice(2, 3)) - &nabla.dual_covariant(&w.slice(0, 2), &v.slice(2, 3));
            assert_eq!(delta.bracket().bracket(v, w), top.concat(&bottom));
        }
    }

    #[test]
    fn im_form_bracket_matches_the_closed_formula() {
        let nabla = ex_a_nabla();
        let ring = nabla.ring().clone();
        let sigma = Mat::from_rows(&ring, vec![vec![ring.parse("x2").unwrap()], vec![ring.one()]], 1);
        let delta = im_form_dorfman(&nabla, &sigma);
        let b = Battery::new(&ring, DEFAULT_SEED);
        assert!(delta.check_axioms(&b).passed());
        let sigma_star = |x: &Section| Section::new(&ring, vec![x.dot(&sigma.column(0))]);
        for t in b.tuples(&[3, 3]) {
            let (v, w) = (&t[0], &t[1]);
            let (x, y) = (v.slice(0, 2), w.slice(0, 2));
            let top = vf_bracket(&x, &y);
            let bottom = &(&nabla.dual_covariant(&x, &(&w.slice(2, 3) + &sigma_star(&y)))
                - &nabla.dual_covariant(&y, &(&v.slice(2, 3) + &sigma_star(&x))))
                - &sigma_star(&top);
            assert_eq!(delta.bracket().bracket(v, w), top.concat(&bottom));
        }
    }

    #[test]
    fn closed_form_curvature_on_frames() {
        let nabla = ex_a_nabla();
        let delta = standard_dorfman(&nabla);
        let ring = nabla.ring().clone();
        let b = Battery::new(&ring, DEFAULT_SEED);
        for t in b.tuples(&[3, 3]) {
            assert_eq!(delta.curvature(&t[0], &t[1]), standard_curvature_closed_form(&nabla, &t[0], &t[1]));
        }
    }

    #[test]
    fn swapped_slots_flip_the_form_part() {
        // v1 = (∂1, 0), v2 = (0, ε*): R_Δ(v1,v2)(ε,0) = (0, −dx2)
        let nabla = ex_a_nabla();
        let delta = standard_dorfman(&nabla);
        let ring = nabla.ring().clone();
        let v1 = Section::unit(&ring, 3, 0);
        let v2 = Section::unit(&ring, 3, 2);
        let e = Section::unit(&ring, 3, 0);
        let expected = Section::parse(&ring, &["0", "0", "-1"]).unwrap();
        assert_eq!(delta.curvature_apply(&v1, &v2, &e), expected);
        assert_eq!(standard_curvature_closed_form(&nabla, &v1, &v2).apply(&e), expected);
    }

    #[test]
    fn flat_connection_gives_flat_dorfman() {
        let ring = Ring::numbered("x", 1);
        let delta = standard_dorfman(&Christoffel::flat(&ring, 1));
        let b = Battery::new(&ring, 2);
        assert!(delta.bracket().check_lie(&b).passed());
        for t in b.tuples(&[2, 2]) {
            assert!(delta.curvature(&t[0], &t[1]).is_zero());
        }
    }

    #[test]
    fn trivial_pairing_accepts_any_connection() {
        // Q = TM over R², B rank 1 with ∇_{∂2} = x1
        let ring = Ring::numbered("x", 2);
        let q = AnchoredBracket::tangent(&ring);
        let symbols = vec![vec![Section::zero(&ring, 1)], vec![Section::parse(&ring, &["x1"]).unwrap()]];
        let delta = trivial_dorfman(q, symbols);
        let b = Battery::new(&ring, DEFAULT_SEED);
        assert!(delta.check_axioms(&b).passed());
        // Q is Lie yet R_Δ ≠ 0 since the pairing is degenerate
        let d1 = Section::unit(&ring, 2, 0);
        let d2 = Section::unit(&ring, 2, 1);
        assert!(!delta.curvature(&d1, &d2).is_zero());
        assert!(delta.check_curvature_vs_jacobiator(&b).passed());
    }
}
