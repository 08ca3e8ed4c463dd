//! The Bott–Dorfman connection `Δ_k ē = class of [k, e]` of an isotropic
//! subalgebroid `K` of a Courant algebroid, acting on `Γ(C/K)`.
//!
//! `C/K` is presented by the deterministic complement `W` of `K`, so a class
//! is the vector of `W`-coordinates of any representative.

use thiserror::Error;

use super::{DorfmanConnection, DorfmanError, PreDual};
use crate::algebroid::AnchoredBracket;
use crate::battery::Battery;
use crate::bundle::cartan::vf_bracket;
use crate::bundle::subspace::{rref, Subspace};
use crate::bundle::{Mat, Section};
use crate::courant::CourantData;
use crate::report::{CheckReport, Checker};
use crate::symkernel::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BottError {
    #[error("K is not isotropic: <{left}, {right}> = {value}")]
    NotIsotropic { left: String, right: String, value: String },
    #[error("Γ(K) is not closed under the bracket: [{left}, {right}] leaves K by {residual}")]
    NotClosed { left: String, right: String, residual: String },
    #[error("K has rank {k} inside a bundle of rank {c}")]
    Shape { k: usize, c: usize },
    #[error(transparent)]
    Dorfman(#[from] DorfmanError),
}

#[derive(Debug, Clone)]
pub struct BottDorfman {
    courant: CourantData,
    k: Subspace,
    delta: DorfmanConnection,
}

impl BottDorfman {
    pub fn new(courant: &CourantData, k: &Subspace) -> Result<BottDorfman, BottError> {
        let ring = courant.ring().clone();
        let c_rank = courant.rank();
        if k.dim() != c_rank {
            return Err(BottError::Shape { k: k.dim(), c: c_rank });
        }
        let kf = k.frame_sections(&ring);
        for a in &kf {
            for b in &kf {
                let v = courant.pair(a, b);
                if !v.is_zero() {
                    return Err(BottError::NotIsotropic { left: a.to_string(), right: b.to_string(), value: v.to_string() });
                }
            }
        }
        let kr = kf.len();
        let mut table = Vec::with_capacity(kr);
        for a in &kf {
            let mut row = Vec::with_capacity(kr);
            for b in &kf {
                let br = courant.bracket(a, b);
                let res = k.residual(&br);
                if !res.is_zero() {
                    return Err(BottError::NotClosed { left: a.to_string(), right: b.to_string(), residual: res.to_string() });
                }
                row.push(Section::new(&ring, k.coordinates(&br).0));
            }
            table.push(row);
        }
        let k_mat = Mat::from_columns(&ring, c_rank, &kf);
        let anchor = courant.anchor().compose(&k_mat);
        let bracket = AnchoredBracket::new(&ring, anchor.clone(), table).map_err(DorfmanError::from)?;

        let w = k.complement_sections(&ring);
        let wr = w.len();
        let pairing = Mat::from_rows(&ring, kf.iter().map(|a| w.iter().map(|b| courant.pair(a, b)).collect()).collect(), wr);
        let n = ring.len();
        let d_cols: Vec<Section> = (0..n).map(|m| class(k, &courant.big_d(&ring.var(m)))).collect();
        let d_matrix = Mat::from_columns(&ring, wr, &d_cols);
        let predual = PreDual::new(&ring, anchor, pairing, d_matrix)?;
        let symbols = kf.iter().map(|a| w.iter().map(|b| class(k, &courant.bracket(a, b))).collect()).collect();
        let delta = DorfmanConnection::new(predual, bracket, symbols)?;
        Ok(BottDorfman { courant: courant.clone(), k: k.clone(), delta })
    }

    pub fn connection(&self) -> &DorfmanConnection {
        &self.delta
    }

    pub fn subalgebroid(&self) -> &Subspace {
        &self.k
    }

    /// The class of a section of `C` in `C/K`.
    pub fn class_of(&self, e: &Section) -> Section {
        class(&self.k, e)
    }

    /// The representative in `span W` of a class.
    pub fn lift(&self, e_bar: &Section) -> Section {
        let ring = self.courant.ring();
        let w = self.k.complement_sections(ring);
        Section::combination(ring, self.courant.rank(), e_bar.comps(), &w)
    }

    /// A section of `K` given by its `K`-frame coordinates, as a section of `C`.
    pub fn embed_k(&self, k: &Section) -> Section {
        let ring = self.courant.ring();
        Section::combination(ring, self.courant.rank(), k.comps(), &self.k.frame_sections(ring))
    }

    /// `Δ_k ē` agrees with the class of `[k, e]` for arbitrary representatives.
    pub fn check_definition(&self, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("bott-dorfman", "Bott-Dorfman connection of an isotropic subalgebroid");
        let kr = self.k.rank();
        for t in battery.tuples(&[kr, self.courant.rank()]) {
            let (kk, e) = (&t[0], &t[1]);
            let lhs = self.delta.apply(kk, &self.class_of(e));
            let rhs = self.class_of(&self.courant.bracket(&self.embed_k(kk), e));
            let diff = &lhs - &rhs;
            ck.expect_zero("D_k [e] = [[k, e]]", diff.is_zero(), &[kk.to_string(), e.to_string()], &diff);
        }
        ck.finish()
    }

    /// `ρ̄(Δ_k ē) = ∇^S_{ρ(k)} ρ̄(ē)` when `S = ρ(K)` has a constant frame.
    pub fn check_bott_intertwining(&self, battery: &Battery) -> CheckReport {
        let name = "bott-intertwining";
        let anchor = "anchor intertwines the Bott-Dorfman and Bott connections";
        let ring = self.courant.ring();
        let n = ring.len();
        let images: Vec<Section> = self.k.frame_sections(ring).iter().map(|k| self.courant.rho(k)).collect();
        let Some(mut rows) =
            images.iter().map(|s| s.comps().iter().map(|p| p.as_constant()).collect::<Option<Vec<Rational>>>()).collect::<Option<Vec<_>>>()
        else {
            return CheckReport::not_applicable(name, anchor, "rho(K) has no constant frame; the singular case is not modeled");
        };
        let pivots = rref(&mut rows, n);
        rows.truncate(pivots.len());
        let s = Subspace::new(n, rows).expect("row-reduced rows are independent");
        let mut ck = Checker::new(name, anchor);
        for t in battery.tuples(&[self.k.rank(), self.courant.rank()]) {
            let (kk, e) = (&t[0], &t[1]);
            let lhs = self.courant.rho(&self.lift(&self.delta.apply(kk, &self.class_of(e))));
            let rhs = vf_bracket(&self.courant.rho(&self.embed_k(kk)), &self.courant.rho(&self.lift(&self.class_of(e))));
            let res = s.residual(&(&lhs - &rhs));
            ck.expect_zero("rho(D_k e) - [rho k, rho e] in S", res.is_zero(), &[kk.to_string(), e.to_string()], &res);
        }
        ck.finish()
    }
}

fn class(k: &Subspace, e: &Section) -> Section {
    Section::new(e.ring(), k.coordinates(e).1)
}
