//! Anchored brackets given by frame structure functions.
//!
//! The bracket of arbitrary sections is the Leibniz extension of the frame
//! table: for `q = Σ φ_i q_i` and `q' = Σ ψ_j q_j`,
//!
//! `[q, q'] = Σ φ_i ψ_j [q_i, q_j] + Σ_j ρ(q)(ψ_j) q_j − Σ_i ρ(q')(φ_i) q_i`.
//!
//! Antisymmetry is never assumed; `check_lie` tests it.

use thiserror::Error;

use crate::battery::Battery;
use crate::bundle::cartan::{apply_vf, vf_bracket};
use crate::bundle::{Mat, Section};
use crate::report::{CheckReport, Checker};
use crate::symkernel::{Poly, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebroidError {
    #[error("anchor must be {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    AnchorShape { expected_rows: usize, expected_cols: usize, rows: usize, cols: usize },
    #[error("structure table must be {rank}x{rank} with sections of rank {rank}")]
    TableShape { rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchoredBracket {
    ring: Ring,
    rank: usize,
    anchor: Mat,
    structure: Vec<Vec<Section>>,
}

impl AnchoredBracket {
    /// `anchor` is `n × rank`; `structure[i][j] = [q_i, q_j]`.
    pub fn new(ring: &Ring, anchor: Mat, structure: Vec<Vec<Section>>) -> Result<AnchoredBracket, AlgebroidError> {
        let rank = anchor.cols;
        if anchor.rows != ring.len() {
            return Err(AlgebroidError::AnchorShape {
                expected_rows: ring.len(),
                expected_cols: rank,
                rows: anchor.rows,
                cols: anchor.cols,
            });
        }
        if structure.len() != rank || structure.iter().any(|row| row.len() != rank || row.iter().any(|s| s.len() != rank)) {
            return Err(AlgebroidError::TableShape { rank });
        }
        Ok(AnchoredBracket { ring: ring.clone(), rank, anchor, structure })
    }

    /// `TM` with the bracket of vector fields.
    pub fn tangent(ring: &Ring) -> AnchoredBracket {
        let n = ring.len();
        let structure = vec![vec![Section::zero(ring, n); n]; n];
        AnchoredBracket::new(ring, Mat::identity(ring, n), structure).expect("shapes agree")
    }

    /// Zero anchor with the given frame brackets.
    pub fn with_zero_anchor(ring: &Ring, structure: Vec<Vec<Section>>) -> Result<AnchoredBracket, AlgebroidError> {
        let rank = structure.len();
        AnchoredBracket::new(ring, Mat::zero(ring, ring.len(), rank), structure)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn base_dim(&self) -> usize {
        self.ring.len()
    }

    pub fn anchor(&self) -> &Mat {
        &self.anchor
    }

    pub fn structure(&self, i: usize, j: usize) -> &Section {
        &self.structure[i][j]
    }

    pub fn structure_table(&self) -> &Vec<Vec<Section>> {
        &self.structure
    }

    /// A copy with one frame bracket replaced.
    pub fn with_structure(&self, i: usize, j: usize, value: Section) -> AnchoredBracket {
        let mut out = self.clone();
        out.structure[i][j] = value;
        out
    }

    /// `ρ(q)` as a vector field.
    pub fn rho(&self, q: &Section) -> Section {
        self.anchor.apply(q)
    }

    /// `ρ(q)(φ)`.
    pub fn act(&self, q: &Section, phi: &Poly) -> Poly {
        apply_vf(&self.rho(q), phi)
    }

    pub fn bracket(&self, q: &Section, qp: &Section) -> Section {
        assert_eq!(q.len(), self.rank, "first argument has the wrong rank");
        assert_eq!(qp.len(), self.rank, "second argument has the wrong rank");
        let mut out = Section::zero(&self.ring, self.rank);
        for (i, phi) in q.comps().iter().enumerate() {
            if phi.is_zero() {
                continue;
            }
            for (j, psi) in qp.comps().iter().enumerate() {
                if psi.is_zero() || self.structure[i][j].is_zero() {
                    continue;
                }
                out = &out + &self.structure[i][j].scale(&(phi * psi));
            }
        }
        let rq = self.rho(q);
        let rqp = self.rho(qp);
        let comps = (0..self.rank).map(|j| &(out.get(j) + &apply_vf(&rq, qp.get(j))) - &apply_vf(&rqp, q.get(j))).collect();
        Section::new(&self.ring, comps)
    }

    /// `[[q1,q2],q3] + [q2,[q1,q3]] − [q1,[q2,q3]]`.
    pub fn jacobiator(&self, q1: &Section, q2: &Section, q3: &Section) -> Section {
        let a = self.bracket(&self.bracket(q1, q2), q3);
        let b = self.bracket(q2, &self.bracket(q1, q3));
        let c = self.bracket(q1, &self.bracket(q2, q3));
        &(&a + &b) - &c
    }

    pub fn check_anchor_compat(&self, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("anchor-compat", "anchor preserves brackets");
        for t in battery.tuples(&[self.rank, self.rank]) {
            let lhs = self.rho(&self.bracket(&t[0], &t[1]));
            let rhs = vf_bracket(&self.rho(&t[0]), &self.rho(&t[1]));
            let diff = &lhs - &rhs;
            ck.expect_zero("rho[q,q'] = [rho q, rho q']", diff.is_zero(), &[t[0].to_string(), t[1].to_string()], &diff);
        }
        ck.finish()
    }

    pub fn check_lie(&self, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("lie", "Lie algebroid: skew-symmetric bracket satisfying Jacobi");
        for t in battery.tuples(&[self.rank, self.rank]) {
            let sym = &self.bracket(&t[0], &t[1]) + &self.bracket(&t[1], &t[0]);
            ck.expect_zero("[q,q'] + [q',q] = 0", sym.is_zero(), &[t[0].to_string(), t[1].to_string()], &sym);
        }
        for t in battery.tuples(&[self.rank, self.rank, self.rank]) {
            let j = self.jacobiator(&t[0], &t[1], &t[2]);
            ck.expect_zero("Jacobi", j.is_zero(), &[t[0].to_string(), t[1].to_string(), t[2].to_string()], &j);
        }
        ck.finish()
    }
}
