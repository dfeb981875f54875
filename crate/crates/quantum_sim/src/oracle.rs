//! Brute-force oracle for the target claw subspace.
//!
//! For an instance `(A, u = A s + e)` the target subspace is spanned by
//!
//! ```text
//!     |Psi_y> |y>  =  (|0, x_y> + |1, x_y - s>) / sqrt(2)  (x)  |y>,
//! ```
//!
//! one basis vector per image `y` that has a *unique* preimage `x_y` inside
//! the decoding radius. The oracle enumerates that set exhaustively (so it
//! only runs when `q^m` is small), excluding and counting images whose
//! preimage is ambiguous. Holding the secret `s` is what makes the basis
//! constructible at all; the oracle is a verification instrument, not part
//! of any prover.

use crate::error::{SimError, SimResult};
use crate::state::SparseState;
use std::collections::BTreeMap;
use zq_lattice::{
    invert_bruteforce, LweInstance, ProtocolParams, ZqError, ZqVector, ENUMERATION_CAP,
};

/// Enumerated claw-subspace basis for one instance.
#[derive(Debug, Clone)]
pub struct SubspaceOracle {
    q: u64,
    n: usize,
    m: usize,
    /// Image label -> its unique admitted preimage.
    members: BTreeMap<Vec<u64>, ZqVector>,
    /// Images excluded because two preimages fit inside the radius.
    ambiguous: usize,
    /// The secret, needed to spell out the second claw branch.
    witness: ZqVector,
}

impl SubspaceOracle {
    /// Exhaustively classifies every image vector in `Z_q^m`.
    pub fn enumerate(
        k: &LweInstance,
        witness_s: &ZqVector,
        params: &ProtocolParams,
    ) -> SimResult<Self> {
        let a = &k.matrix;
        let (q, n, m) = (a.q(), a.cols(), a.rows());
        if witness_s.q() != q || witness_s.len() != n {
            return Err(SimError::Lattice(ZqError::DimensionMismatch {
                expected: n,
                got: witness_s.len(),
            }));
        }
        let image_count = (0..m).try_fold(1u128, |acc, _| {
            acc.checked_mul(q as u128).filter(|&v| v <= ENUMERATION_CAP)
        });
        if image_count.is_none() {
            return Err(SimError::SupportTooLarge {
                support: u128::MAX,
                cap: ENUMERATION_CAP,
            });
        }

        let mut members = BTreeMap::new();
        let mut ambiguous = 0usize;
        let mut label = vec![0u64; m];
        loop {
            let y = ZqVector::new(q, label.clone()).map_err(SimError::Lattice)?;
            match invert_bruteforce(a, params, &y) {
                Ok(x) => {
                    members.insert(label.clone(), x);
                }
                Err(ZqError::InversionFailed) => {}
                Err(ZqError::AmbiguousPreimage) => ambiguous += 1,
                Err(other) => return Err(SimError::Lattice(other)),
            }
            // Little-endian odometer over Z_q^m.
            let mut pos = 0;
            loop {
                if pos == m {
                    return Ok(Self {
                        q,
                        n,
                        m,
                        members,
                        ambiguous,
                        witness: witness_s.clone(),
                    });
                }
                label[pos] += 1;
                if label[pos] < q {
                    break;
                }
                label[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Number of admitted images.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True when no image is admitted.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of images excluded for having two in-radius preimages.
    pub fn ambiguous_count(&self) -> usize {
        self.ambiguous
    }

    /// The unique preimage of an admitted image, if any.
    pub fn preimage(&self, y: &[u64]) -> Option<&ZqVector> {
        self.members.get(y)
    }

    /// Iterates `(y, x_y)` pairs in lexicographic image order.
    pub fn members(&self) -> impl Iterator<Item = (&Vec<u64>, &ZqVector)> {
        self.members.iter()
    }

    /// Materializes the basis vector `|Psi_y>|y>` for an admitted image.
    pub fn psi_state(&self, y: &[u64]) -> SimResult<SparseState> {
        let x0 = self.members.get(y).ok_or(SimError::NotInSubspace)?;
        let x1 = x0.sub(&self.witness).map_err(SimError::Lattice)?;
        let mut moduli = vec![2];
        moduli.extend(std::iter::repeat(self.q).take(self.n + self.m));
        let mut branch0 = vec![0u64];
        branch0.extend_from_slice(x0.entries());
        branch0.extend_from_slice(y);
        let mut branch1 = vec![1u64];
        branch1.extend_from_slice(x1.entries());
        branch1.extend_from_slice(y);
        let a = std::f64::consts::FRAC_1_SQRT_2;
        SparseState::from_amplitudes(moduli, [(branch0, a), (branch1, a)])
    }

    /// Squared distance from a normalized `(b, x, y)` state to the
    /// subspace: `1 - sum_y <Psi_y, y | state>^2`.
    pub fn distance_to_hk(&self, state: &SparseState) -> SimResult<f64> {
        let mut expected = vec![2u64];
        expected.extend(std::iter::repeat(self.q).take(self.n + self.m));
        if state.moduli() != expected.as_slice() {
            return Err(SimError::LayoutMismatch);
        }
        let mut projected = 0.0;
        for (y, x0) in self.members.iter() {
            let x1 = x0.sub(&self.witness).map_err(SimError::Lattice)?;
            let mut branch0 = vec![0u64];
            branch0.extend_from_slice(x0.entries());
            branch0.extend_from_slice(y);
            let mut branch1 = vec![1u64];
            branch1.extend_from_slice(x1.entries());
            branch1.extend_from_slice(y);
            let inner =
                (state.amp(&branch0) + state.amp(&branch1)) * std::f64::consts::FRAC_1_SQRT_2;
            projected += inner * inner;
        }
        Ok((1.0 - projected).max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prepare::{apply_lwe_map, prepare_phi};
    use crate::robust::closed_form_overlap;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use zq_lattice::{GaussianTable, Ratio, ZqMatrix};

    /// Boundary parameter set: n=1, m=2, q=32, C^2 = 128/5, eps = 8.
    fn params() -> ProtocolParams {
        ProtocolParams::with_c_squared(
            8,
            1,
            1,
            2,
            32,
            Ratio::from_int(1),
            Ratio::from_int(1),
            Ratio::from_int(8),
            Ratio::new(128, 5).unwrap(),
        )
        .unwrap()
    }

    fn instance(seed: u64) -> (LweInstance, ZqVector, ZqVector, ProtocolParams) {
        let params = params();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let a = ZqMatrix::new(32, 2, 1, vec![1, 7]).unwrap();
        let s = ZqVector::uniform(32, 1, &mut rng).unwrap();
        let e = GaussianTable::new(32, 1.0).unwrap().sample_vector(2, &mut rng);
        let u = a.mul_vec(&s).unwrap().add(&e).unwrap();
        (LweInstance { matrix: a, u }, s, e, params)
    }

    // ---- enumeration ------------------------------------------------------

    #[test]
    fn members_verify_against_direct_residuals() {
        let (k, s, _, params) = instance(21);
        let oracle = SubspaceOracle::enumerate(&k, &s, &params).unwrap();
        assert!(!oracle.is_empty());
        let radius = params.invert_radius_sq().unwrap();
        for (y, x) in oracle.members() {
            let y_vec = ZqVector::new(32, y.clone()).unwrap();
            let residual = k.matrix.mul_vec(x).unwrap().sub(&y_vec).unwrap().norm_sq();
            assert!(
                radius.admits(residual).unwrap(),
                "member y={y:?} has residual^2 {residual} outside the radius"
            );
        }
    }

    #[test]
    fn exact_images_are_admitted_with_correct_preimage() {
        let (k, s, _, params) = instance(22);
        let oracle = SubspaceOracle::enumerate(&k, &s, &params).unwrap();
        for x in 0..32u64 {
            let xv = ZqVector::new(32, vec![x]).unwrap();
            let y = k.matrix.mul_vec(&xv).unwrap();
            let found = oracle.preimage(y.entries()).expect("exact image must be admitted");
            assert_eq!(found.entries(), xv.entries());
        }
    }

    #[test]
    fn boundary_distance_creates_ambiguous_images() {
        // A = (1, 7) has matrix distance exactly twice the decoding radius
        // (32 = 4 * 8), so midpoints between two lattice images admit two
        // preimages and must be excluded, not misassigned.
        let (k, s, _, params) = instance(23);
        let oracle = SubspaceOracle::enumerate(&k, &s, &params).unwrap();
        assert!(
            oracle.ambiguous_count() > 0,
            "the boundary instance is expected to produce ambiguous images"
        );
        // An explicit midpoint: A*0 = (0,0) and A*4 = (4, 28) differ by
        // (4, -4); y = (2, -2) is at squared distance 8 from both.
        let y = ZqVector::from_centered(32, &[2, -2]).unwrap();
        assert!(oracle.preimage(y.entries()).is_none(), "midpoint image must be excluded");
    }

    // ---- subspace membership ----------------------------------------------

    #[test]
    fn basis_vectors_have_distance_zero() {
        let (k, s, _, params) = instance(24);
        let oracle = SubspaceOracle::enumerate(&k, &s, &params).unwrap();
        let (y, _) = oracle.members().next().unwrap();
        let psi = oracle.psi_state(y).unwrap();
        assert!(oracle.distance_to_hk(&psi).unwrap() < 1e-12);
    }

    #[test]
    fn far_basis_states_have_distance_one() {
        let (k, s, _, params) = instance(25);
        let oracle = SubspaceOracle::enumerate(&k, &s, &params).unwrap();
        // Build a point mass on a rejected image (guaranteed to exist: the
        // image count 2^10 exceeds the q^n = 32 admitted cosets times the
        // window volume).
        let mut rejected = None;
        for y0 in 0..32u64 {
            for y1 in 0..32u64 {
                if oracle.preimage(&[y0, y1]).is_none() {
                    rejected = Some(vec![y0, y1]);
                    break;
                }
            }
        }
        let y = rejected.expect("some image must fall outside every decoding ball");
        let mut label = vec![0, 0];
        label.extend_from_slice(&y);
        let point = SparseState::basis_point(vec![2, 32, 32, 32], label).unwrap();
        assert_eq!(oracle.distance_to_hk(&point).unwrap(), 1.0);
    }

    // ---- the committed state against the subspace --------------------------

    /// The drift-free companion state built from `u - e = A s`: it lies in
    /// the subspace exactly, and its overlap with the committed state equals
    /// (1 + window overlap at shift e) / 2, everything dyadic.
    #[test]
    fn companion_state_certifies_closeness() {
        let (k, s, e, params) = instance(26);
        let oracle = SubspaceOracle::enumerate(&k, &s, &params).unwrap();
        let (phi, _) = prepare_phi(&k, &params, false).unwrap();

        let ideal =
            LweInstance { matrix: k.matrix.clone(), u: k.u.sub(&e).unwrap() };
        let (phi_ideal, _) = prepare_phi(&ideal, &params, false).unwrap();

        // The companion lies in the subspace (its window never reaches an
        // ambiguous image at these parameters).
        let ideal_distance = oracle.distance_to_hk(&phi_ideal).unwrap();
        assert!(ideal_distance < 1e-12, "companion state strayed: {ideal_distance}");

        // Two routes to the overlap: the sparse inner product, and the
        // closed-form window overlap. The ideal amplitudes are dyadic
        // (1/16), but they are built as a product of square roots, so the
        // routes agree only to rounding.
        let inner = phi.inner(&phi_ideal).unwrap();
        let window = closed_form_overlap(params.window_r().unwrap().unwrap(), &e).unwrap();
        assert!(
            (inner - (0.5 + 0.5 * window)).abs() < 1e-12,
            "inner product {inner} vs closed form {}",
            0.5 + 0.5 * window
        );

        // The projection distance is bounded by the distance to any unit
        // vector inside the subspace.
        let distance = oracle.distance_to_hk(&phi).unwrap();
        assert!(distance <= 2.0 - 2.0 * inner + 1e-12);
        assert!(distance <= params.epsilon.as_f64());
    }

    /// Shifted-window supports for distinct committed coordinates never
    /// collide when the matrix distance exceeds the window diameter.
    #[test]
    fn committed_supports_are_disjoint_across_x() {
        let (k, _, _, params) = instance(27);
        let r = params.window_r().unwrap().unwrap();
        let window = crate::robust::create_robust_state(params.m, params.q, r).unwrap();
        let mut by_image: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for x in 0..32u64 {
            let point = SparseState::basis_point(vec![2, 32], vec![0, x]).unwrap();
            let branch = point.tensor(&window).unwrap();
            let mapped = apply_lwe_map(&branch, &k).unwrap();
            for (label, _) in mapped.iter() {
                let y = label[2..].to_vec();
                if let Some(prior) = by_image.insert(y.clone(), x) {
                    panic!("images of x={prior} and x={x} intersect at {y:?}");
                }
            }
        }
    }
}
