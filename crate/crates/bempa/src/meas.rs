//! Measurement-cost analysis: qubit-wise-commuting grouping via sorted
//! insertion, the R̂ shot-reduction estimate, ungrouped shot weight, and
//! per-encoding Hamiltonian reports.
//!
//! The identity term is a classical constant needing no measurement, so it
//! is excluded from grouping and shot estimates throughout.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::encode::Encoding;
use crate::error::{Error, Result};
use crate::model::{build_bh_hamiltonian, BoseHubbardParams, ModeSystem};
use crate::pauli::{PauliString, PauliSum};
use crate::sim::{expectation, Statevector};

/// A partition of a Pauli sum's measurable terms into qubit-wise-commuting
/// groups.
#[derive(Debug, Clone)]
pub struct Grouping {
    groups: Vec<Vec<(PauliString, Complex64)>>,
}

impl Grouping {
    pub fn groups(&self) -> &[Vec<(PauliString, Complex64)>] {
        &self.groups
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn n_terms(&self) -> usize {
        self.groups.iter().map(|g| g.len()).sum()
    }

    /// Sum of |coefficient| over all grouped terms.
    pub fn l1_norm(&self) -> f64 {
        self.groups
            .iter()
            .flat_map(|g| g.iter().map(|(_, c)| c.norm()))
            .sum()
    }

    /// True iff every pair inside every group is qubit-wise commuting.
    pub fn is_qubit_wise_commuting(&self) -> bool {
        self.groups.iter().all(|group| {
            group.iter().enumerate().all(|(i, (a, _))| {
                group[i + 1..]
                    .iter()
                    .all(|(b, _)| a.qubit_wise_commutes(b).unwrap_or(false))
            })
        })
    }
}

/// Sorted insertion: order terms by descending |coefficient| (ties broken by
/// the canonical string order) and put each into the first group it
/// qubit-wise commutes with, opening a new group otherwise.
pub fn sorted_insertion(h: &PauliSum) -> Grouping {
    let mut terms: Vec<(PauliString, Complex64)> = h
        .terms()
        .filter(|(s, _)| !s.is_identity())
        .map(|(s, c)| (s.clone(), *c))
        .collect();
    terms.sort_by(|(sa, ca), (sb, cb)| {
        cb.norm()
            .partial_cmp(&ca.norm())
            .unwrap()
            .then_with(|| sa.cmp(sb))
    });
    let mut groups: Vec<Vec<(PauliString, Complex64)>> = Vec::new();
    'terms: for (string, coeff) in terms {
        for group in groups.iter_mut() {
            if group
                .iter()
                .all(|(member, _)| member.qubit_wise_commutes(&string).unwrap())
            {
                group.push((string, coeff));
                continue 'terms;
            }
        }
        groups.push(vec![(string, coeff)]);
    }
    Grouping { groups }
}

/// R̂ = [ (Σ_k Σ_l |a_kl|) / (Σ_k √(Σ_l |a_kl|²)) ]²: the estimated
/// multiplicative reduction in shots from measuring groups instead of
/// individual terms.
pub fn r_hat(grouping: &Grouping) -> Result<f64> {
    if grouping.groups.is_empty() {
        return Err(Error::Domain(
            "R-hat of an empty grouping is undefined".into(),
        ));
    }
    let numerator: f64 = grouping.l1_norm();
    let denominator: f64 = grouping
        .groups
        .iter()
        .map(|g| g.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt())
        .sum();
    Ok((numerator / denominator).powi(2))
}

/// Shot weight of term-by-term measurement, up to the 1/ε² factor:
/// Σᵢ |aᵢ|·√(Var\[Pᵢ\]) with Var\[Pᵢ\] = 1 − ⟨Pᵢ⟩² under the given state, or
/// Var = 1 for every term when no state is supplied.
pub fn n_ungrouped(h: &PauliSum, state: Option<&Statevector>) -> Result<f64> {
    if let Some(s) = state {
        if s.n_qubits() != h.n_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "state on {} qubits vs operator on {}",
                s.n_qubits(),
                h.n_qubits()
            )));
        }
    }
    let mut total = 0.0;
    for (string, coeff) in h.terms() {
        if string.is_identity() {
            continue;
        }
        let variance = match state {
            Some(s) => {
                let mut single = PauliSum::zero(h.n_qubits());
                single.add_term(string.clone(), Complex64::new(1.0, 0.0));
                let mean = expectation(s, &single)?;
                (1.0 - mean * mean).max(0.0)
            }
            None => 1.0,
        };
        total += coeff.norm() * variance.sqrt();
    }
    Ok(total)
}

/// Lattice templates covered by the encoding report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportLattice {
    /// Two coupled modes (a single edge).
    TwoMode,
    /// Periodic 1D ring.
    Ring,
    /// Periodic square lattice.
    Square,
}

impl ReportLattice {
    pub fn name(self) -> &'static str {
        match self {
            ReportLattice::TwoMode => "two_mode",
            ReportLattice::Ring => "ring",
            ReportLattice::Square => "square",
        }
    }

    pub fn build(self, d: usize, encoding: Encoding, ring_modes: usize, square_side: usize) -> Result<ModeSystem> {
        match self {
            ReportLattice::TwoMode => ModeSystem::chain(2, d, encoding),
            ReportLattice::Ring => ModeSystem::ring(ring_modes, d, encoding),
            ReportLattice::Square => ModeSystem::square(square_side, d, encoding),
        }
    }
}

/// One row of the encoding report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EncodingReportRow {
    pub lattice: String,
    pub n_modes: usize,
    pub d: usize,
    pub encoding: String,
    pub n_qubits: usize,
    /// Non-identity terms in the compiled Hamiltonian.
    pub n_terms: usize,
    pub mean_weight: f64,
    pub max_weight: usize,
    /// (weight, count) pairs, ascending in weight.
    pub weight_histogram: Vec<(usize, usize)>,
    /// Shot-reduction estimate under sorted insertion; omitted for unary,
    /// whose ungrouped baseline differs and is not directly comparable.
    pub r_hat: Option<f64>,
    /// No-state (Var = 1) convention.
    pub n_ungrouped: f64,
}

/// Weight histogram of the non-identity terms.
pub fn weight_histogram(h: &PauliSum) -> Vec<(usize, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for (string, _) in h.terms() {
        if string.is_identity() {
            continue;
        }
        *counts.entry(string.weight()).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}

/// Mean Pauli weight over the non-identity terms.
pub fn mean_weight(h: &PauliSum) -> f64 {
    let mut total = 0usize;
    let mut count = 0usize;
    for (string, _) in h.terms() {
        if string.is_identity() {
            continue;
        }
        total += string.weight();
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        total as f64 / count as f64
    }
}

/// Compile the Bose-Hubbard Hamiltonian for every (lattice, d, encoding)
/// cell and report term counts, weights, and grouping quality.
pub fn encoding_report(
    params: &BoseHubbardParams,
    lattices: &[ReportLattice],
    d_values: &[usize],
    encodings: &[Encoding],
    ring_modes: usize,
    square_side: usize,
) -> Result<Vec<EncodingReportRow>> {
    let mut rows = Vec::new();
    for &lattice in lattices {
        for &d in d_values {
            for &encoding in encodings {
                let system = lattice.build(d, encoding, ring_modes, square_side)?;
                let h = build_bh_hamiltonian(params, &system)?;
                // Unary's ungrouped baseline differs, so its R̂ would not be
                // comparable; skip the grouping work entirely.
                let r = if encoding == Encoding::Unary {
                    None
                } else {
                    let grouping = sorted_insertion(&h);
                    if grouping.n_groups() == 0 {
                        None
                    } else {
                        Some(r_hat(&grouping)?)
                    }
                };
                rows.push(EncodingReportRow {
                    lattice: lattice.name().to_string(),
                    n_modes: system.n_modes(),
                    d,
                    encoding: encoding.name().to_string(),
                    n_qubits: system.n_qubits(),
                    n_terms: h
                        .terms()
                        .filter(|(s, _)| !s.is_identity())
                        .count(),
                    mean_weight: mean_weight(&h),
                    max_weight: h
                        .terms()
                        .map(|(s, _)| s.weight())
                        .max()
                        .unwrap_or(0),
                    weight_histogram: weight_histogram(&h),
                    r_hat: r,
                    n_ungrouped: n_ungrouped(&h, None)?,
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliOp;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Hand-traced sorted insertion: {3Z₀, 2Z₀Z₁, 1X₀} groups as
    /// {Z₀, Z₀Z₁} and {X₀}.
    #[test]
    fn sorted_insertion_hand_trace() {
        let mut h = PauliSum::zero(2);
        h.add_term(PauliString::single(2, 0, PauliOp::Z), c(3.0));
        h.add_term(PauliString::parse("Z0 Z1", 2).unwrap(), c(2.0));
        h.add_term(PauliString::single(2, 0, PauliOp::X), c(1.0));
        let grouping = sorted_insertion(&h);
        assert_eq!(grouping.n_groups(), 2);
        assert_eq!(grouping.groups()[0].len(), 2);
        assert_eq!(grouping.groups()[0][0].0.to_string(), "Z0");
        assert_eq!(grouping.groups()[0][1].0.to_string(), "Z0 Z1");
        assert_eq!(grouping.groups()[1][0].0.to_string(), "X0");
        assert!(grouping.is_qubit_wise_commuting());
    }

    #[test]
    fn single_term_sum_gives_singleton_group() {
        let mut h = PauliSum::zero(1);
        h.add_term(PauliString::single(1, 0, PauliOp::Y), c(0.5));
        let grouping = sorted_insertion(&h);
        assert_eq!(grouping.n_groups(), 1);
        assert_eq!(grouping.n_terms(), 1);
    }

    #[test]
    fn mutually_commuting_sum_collapses_to_one_group() {
        let mut h = PauliSum::zero(3);
        h.add_term(PauliString::parse("Z0", 3).unwrap(), c(1.0));
        h.add_term(PauliString::parse("Z0 Z1", 3).unwrap(), c(0.5));
        h.add_term(PauliString::parse("Z1 Z2", 3).unwrap(), c(0.25));
        let grouping = sorted_insertion(&h);
        assert_eq!(grouping.n_groups(), 1);
    }

    #[test]
    fn identity_term_is_excluded() {
        let mut h = PauliSum::zero(2);
        h.add_term(PauliString::identity(2), c(5.0));
        h.add_term(PauliString::single(2, 0, PauliOp::Z), c(1.0));
        let grouping = sorted_insertion(&h);
        assert_eq!(grouping.n_terms(), 1);
        assert!((n_ungrouped(&h, None).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn r_hat_singletons_equal_one() {
        let mut h = PauliSum::zero(1);
        h.add_term(PauliString::single(1, 0, PauliOp::Z), c(2.0));
        h.add_term(PauliString::single(1, 0, PauliOp::X), c(1.0));
        let grouping = sorted_insertion(&h);
        assert_eq!(grouping.n_groups(), 2);
        assert!((r_hat(&grouping).unwrap() - 1.0).abs() < 1e-12);
    }

    /// One group of two equal-magnitude terms: R̂ = (2a / (a√2))² = 2.
    #[test]
    fn r_hat_equal_pair_is_two() {
        let mut h = PauliSum::zero(2);
        h.add_term(PauliString::parse("Z0", 2).unwrap(), c(0.7));
        h.add_term(PauliString::parse("Z0 Z1", 2).unwrap(), c(0.7));
        let grouping = sorted_insertion(&h);
        assert_eq!(grouping.n_groups(), 1);
        assert!((r_hat(&grouping).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn r_hat_of_empty_grouping_errors() {
        let grouping = sorted_insertion(&PauliSum::zero(2));
        assert!(r_hat(&grouping).is_err());
    }

    #[test]
    fn r_hat_at_least_one_on_models() {
        let params = BoseHubbardParams::new(1.0, 1.0, 1.0).unwrap();
        for encoding in [Encoding::StdBinary, Encoding::Gray] {
            for d in [2usize, 4, 8] {
                let system = ModeSystem::chain(2, d, encoding).unwrap();
                let h = build_bh_hamiltonian(&params, &system).unwrap();
                let grouping = sorted_insertion(&h);
                assert!(grouping.is_qubit_wise_commuting());
                assert!(r_hat(&grouping).unwrap() >= 1.0 - 1e-12);
                // Partition conservation: groups carry the full L1 weight.
                let direct: f64 = h
                    .terms()
                    .filter(|(s, _)| !s.is_identity())
                    .map(|(_, c)| c.norm())
                    .sum();
                assert!((grouping.l1_norm() - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn n_ungrouped_vanishing_variance() {
        let mut h = PauliSum::zero(1);
        h.add_term(PauliString::single(1, 0, PauliOp::Z), c(3.0));
        let state = Statevector::basis(1, 0).unwrap();
        assert!(n_ungrouped(&h, Some(&state)).unwrap().abs() < 1e-12);
        // Without a state the Var = 1 convention gives Σ|a|.
        assert!((n_ungrouped(&h, None).unwrap() - 3.0).abs() < 1e-15);
    }

    /// Binary→Gray is a Clifford change of basis, so the ungrouped shot
    /// weight is identical between the two encodings.
    #[test]
    fn n_ungrouped_equal_between_compact_encodings() {
        let params = BoseHubbardParams::new(1.0, 1.0, 1.0).unwrap();
        let std = ModeSystem::chain(2, 4, Encoding::StdBinary).unwrap();
        let gray = ModeSystem::chain(2, 4, Encoding::Gray).unwrap();
        let h_std = build_bh_hamiltonian(&params, &std).unwrap();
        let h_gray = build_bh_hamiltonian(&params, &gray).unwrap();
        let a = n_ungrouped(&h_std, None).unwrap();
        let b = n_ungrouped(&h_gray, None).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn report_covers_requested_cells() {
        let params = BoseHubbardParams::new(1.0, 1.0, 1.0).unwrap();
        let rows = encoding_report(
            &params,
            &[ReportLattice::TwoMode],
            &[4, 8],
            &[Encoding::StdBinary, Encoding::Gray, Encoding::Unary],
            4,
            3,
        )
        .unwrap();
        assert_eq!(rows.len(), 6);
        // Unary spends d qubits per mode and reports no R̂.
        let unary = rows
            .iter()
            .find(|r| r.encoding == "unary" && r.d == 4)
            .unwrap();
        assert_eq!(unary.n_qubits, 8);
        assert!(unary.r_hat.is_none());
        // Compact codes use n·log2(d) qubits.
        let std = rows
            .iter()
            .find(|r| r.encoding == "std_binary" && r.d == 8)
            .unwrap();
        assert_eq!(std.n_qubits, 6);
        assert!(std.r_hat.is_some());
    }

    /// d = 2 makes standard binary and Gray coincide bit for bit.
    #[test]
    fn two_level_reports_identical() {
        let params = BoseHubbardParams::new(1.0, 1.0, 1.0).unwrap();
        let rows = encoding_report(
            &params,
            &[ReportLattice::TwoMode],
            &[2],
            &[Encoding::StdBinary, Encoding::Gray],
            4,
            3,
        )
        .unwrap();
        assert_eq!(rows[0].n_terms, rows[1].n_terms);
        assert_eq!(rows[0].weight_histogram, rows[1].weight_histogram);
        assert_eq!(rows[0].r_hat, rows[1].r_hat);
        assert!((rows[0].n_ungrouped - rows[1].n_ungrouped).abs() < 1e-15);
    }

    /// Gray averages lower Pauli weight than standard binary on the two-mode
    /// model for d ∈ {4, 8, 16}.
    #[test]
    fn gray_weight_no_worse_than_binary() {
        let params = BoseHubbardParams::new(1.0, 1.0, 1.0).unwrap();
        for d in [4usize, 8, 16] {
            let std = ModeSystem::chain(2, d, Encoding::StdBinary).unwrap();
            let gray = ModeSystem::chain(2, d, Encoding::Gray).unwrap();
            let w_std = mean_weight(&build_bh_hamiltonian(&params, &std).unwrap());
            let w_gray = mean_weight(&build_bh_hamiltonian(&params, &gray).unwrap());
            assert!(
                w_gray <= w_std + 1e-12,
                "d={d}: gray {w_gray} vs std {w_std}"
            );
        }
    }
}
