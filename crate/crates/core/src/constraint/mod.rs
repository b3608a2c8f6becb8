//! Ratio constraints on environment populations and their exact solution.
//!
//! Coupling a system to an environment makes joint levels degenerate
//! whenever a system gap equals an environment gap: `E_n + E'_r = E_m + E'_s`
//! forces the population identity `p_n·g(E'_r) = p_m·g(E'_s)`, i.e.
//! `log g(E'_s) - log g(E'_r) = log p_n - log p_m`.
//! The graph of these exact offset constraints either
//! admits an assignment (solved by a weighted union-find, per connected
//! component) or contains an inconsistent cycle whose exact mismatch is the
//! refutation. Zero system populations force zero environment populations,
//! tracked as marks rather than offsets.

mod union_find;
pub mod oracle;

use std::collections::HashMap;
use std::sync::Arc;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::oscillator::MultimodeSpectrum;
use crate::spectrum::Spectrum;
use crate::state::{LogState, LogValue};

use union_find::{PlainDsu, WeightedDsu};

/// Why an edge exists: an internal environment degeneracy, or a matched
/// system/environment gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// The two environment levels are exactly degenerate.
    Degeneracy,
    /// System pair (n, m) with `E_n - E_m` equal to the environment gap;
    /// n is the higher system level.
    GapMatch { sys_pair: (usize, usize), gap: Exact },
}

/// One ratio constraint: `log g(to) - log g(from) = offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub offset: Exact,
    pub provenance: Provenance,
}

/// Record that an environment level is forced to zero population: the
/// zero-population system level `sys_zero` is degenerate-jointly paired with
/// the finite-population level `sys_finite` against this node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroMark {
    pub node: usize,
    pub sys_zero: usize,
    pub sys_finite: usize,
}

/// Exact offset constraints over environment level indices.
#[derive(Debug, Clone)]
pub struct ConstraintGraph {
    basis: Arc<Basis>,
    energies: Vec<Exact>,
    edges: Vec<Edge>,
    zero_marks: Vec<ZeroMark>,
}

impl ConstraintGraph {
    pub fn new(
        basis: Arc<Basis>,
        energies: Vec<Exact>,
        edges: Vec<Edge>,
        zero_marks: Vec<ZeroMark>,
    ) -> Result<ConstraintGraph> {
        let n = energies.len();
        if n == 0 {
            return Err(Error::invalid("constraint graph needs at least one node"));
        }
        for e in &energies {
            basis.admits(e)?;
        }
        for edge in &edges {
            if edge.from >= n || edge.to >= n || edge.from == edge.to {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) references invalid nodes",
                    edge.from, edge.to
                )));
            }
        }
        for mark in &zero_marks {
            if mark.node >= n {
                return Err(Error::invalid(format!(
                    "zero mark references invalid node {}",
                    mark.node
                )));
            }
        }
        Ok(ConstraintGraph {
            basis,
            energies,
            edges,
            zero_marks,
        })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn node_count(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[Exact] {
        &self.energies
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn zero_marks(&self) -> &[ZeroMark] {
        &self.zero_marks
    }
}

/// Groups level indices by exact energy equality, classes ordered by energy.
pub fn degeneracy_classes(levels: &[Exact], basis: &Basis) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..levels.len()).collect();
    order.sort_by(|&a, &b| {
        levels[a]
            .cmp_by(&levels[b], basis)
            .then_with(|| a.cmp(&b))
    });
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        match classes.last_mut() {
            Some(class) if levels[class[0]] == levels[idx] => class.push(idx),
            _ => classes.push(vec![idx]),
        }
    }
    classes
}

/// Builds the ratio-constraint graph for a system/environment pairing.
///
/// Edges are thinned without changing the constraint closure: degenerate
/// environment levels are chained with zero offsets, and each matched
/// system gap contributes one bridge per source degeneracy class (the chain
/// edges imply the rest). Zero system populations paired against finite
/// ones become [`ZeroMark`]s on the reachable class.
pub fn build_ratio_graph(
    sys_spec: &Spectrum,
    sys_state: &LogState,
    env_energies: &[Exact],
) -> Result<ConstraintGraph> {
    if sys_state.len() != sys_spec.len() {
        return Err(Error::invalid("state and spectrum lengths differ"));
    }
    if env_energies.is_empty() {
        return Err(Error::invalid("environment has no levels"));
    }
    let basis = sys_spec.basis().clone();
    let classes = degeneracy_classes(env_energies, &basis);
    let class_by_energy: HashMap<&Exact, usize> = classes
        .iter()
        .enumerate()
        .map(|(ci, class)| (&env_energies[class[0]], ci))
        .collect();

    let mut edges = Vec::new();
    for class in &classes {
        for pair in class.windows(2) {
            edges.push(Edge {
                from: pair[0],
                to: pair[1],
                offset: Exact::zero(),
                provenance: Provenance::Degeneracy,
            });
        }
    }

    let mut zero_marks = Vec::new();
    for hi in 1..sys_spec.len() {
        for lo in 0..hi {
            let gap = sys_spec.energy(hi) - sys_spec.energy(lo);
            match (sys_state.value(hi), sys_state.value(lo)) {
                (LogValue::Finite(log_hi), LogValue::Finite(log_lo)) => {
                    let offset = log_hi - log_lo;
                    for (ci, class) in classes.iter().enumerate() {
                        let target = &env_energies[class[0]] + &gap;
                        if let Some(&cj) = class_by_energy.get(&target) {
                            edges.push(Edge {
                                from: classes[ci][0],
                                to: classes[cj][0],
                                offset: offset.clone(),
                                provenance: Provenance::GapMatch {
                                    sys_pair: (hi, lo),
                                    gap: gap.clone(),
                                },
                            });
                        }
                    }
                }
                // A zero population jointly degenerate with a finite one
                // forces the environment partner of the finite side to zero.
                (LogValue::NegInfinity, LogValue::Finite(_)) => {
                    for class in &classes {
                        let target = &env_energies[class[0]] + &gap;
                        if let Some(&cj) = class_by_energy.get(&target) {
                            zero_marks.push(ZeroMark {
                                node: classes[cj][0],
                                sys_zero: hi,
                                sys_finite: lo,
                            });
                        }
                    }
                }
                (LogValue::Finite(_), LogValue::NegInfinity) => {
                    for class in &classes {
                        let source = &env_energies[class[0]] - &gap;
                        if let Some(&cj) = class_by_energy.get(&source) {
                            zero_marks.push(ZeroMark {
                                node: classes[cj][0],
                                sys_zero: lo,
                                sys_finite: hi,
                            });
                        }
                    }
                }
                (LogValue::NegInfinity, LogValue::NegInfinity) => {}
            }
        }
    }
    ConstraintGraph::new(basis, env_energies.to_vec(), edges, zero_marks)
}

/// One connected component of the solved graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Minimal-energy member (ties by index); its log-population anchors
    /// the component at zero.
    pub anchor: usize,
    pub members: Vec<usize>,
    /// Whole component forced to zero population.
    pub zero: bool,
}

/// A consistent environment assignment: per-component log-populations
/// anchored at zero on the minimal-energy node.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvAssignment {
    components: Vec<Component>,
    logg: Vec<LogValue>,
}

impl EnvAssignment {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn logg(&self) -> &[LogValue] {
        &self.logg
    }

    pub fn value(&self, node: usize) -> &LogValue {
        &self.logg[node]
    }

    /// Component index of each node.
    pub fn component_of(&self) -> Vec<usize> {
        let n = self.logg.len();
        let mut out = vec![usize::MAX; n];
        for (ci, comp) in self.components.iter().enumerate() {
            for &m in &comp.members {
                out[m] = ci;
            }
        }
        out
    }
}

/// Exact witness that no assignment exists.
#[derive(Debug, Clone, PartialEq)]
pub enum InconsistencyCertificate {
    /// A cycle whose offsets do not sum to zero: the accepted path edges
    /// from the closing edge's source to its target, then the closing edge.
    /// `mismatch` is the exact path-sum minus the closing offset.
    CycleMismatch { cycle: Vec<Edge>, mismatch: Exact },
    /// Every environment level is forced to zero population: no state at
    /// all remains.
    NoSupport { marks: Vec<ZeroMark> },
}

/// Solver outcome; inconsistency is a verdict, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Consistent(EnvAssignment),
    Inconsistent(InconsistencyCertificate),
}

/// Solves the ratio constraints exactly.
///
/// Pass one unions every edge to find components and propagate zero marks
/// (a zero anywhere in a component zeroes all of it, making its offset
/// constraints vacuous). Pass two runs the offset-weighted union-find over
/// the remaining components; the first conflicting edge yields a cycle
/// certificate with the exact mismatch.
pub fn solve_env_state(graph: &ConstraintGraph) -> SolveOutcome {
    let n = graph.node_count();
    let mut plain = PlainDsu::new(n);
    for edge in &graph.edges {
        plain.union(edge.from, edge.to);
    }
    let mut zero = vec![false; n];
    for mark in &graph.zero_marks {
        let root = plain.find(mark.node);
        zero[root] = true;
    }
    let node_zero: Vec<bool> = (0..n).map(|i| zero[plain.find(i)]).collect();

    if n > 0 && node_zero.iter().all(|&z| z) {
        let mut marks = graph.zero_marks.clone();
        marks.dedup_by_key(|m| m.node);
        return SolveOutcome::Inconsistent(InconsistencyCertificate::NoSupport { marks });
    }

    let mut weighted = WeightedDsu::new(n);
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (idx, edge) in graph.edges.iter().enumerate() {
        if node_zero[edge.from] {
            // Zero propagates across edges, so both endpoints are zero and
            // the offset constraint holds vacuously.
            continue;
        }
        match weighted.union(edge.from, edge.to, &edge.offset) {
            Ok(_) => {
                adjacency[edge.from].push((edge.to, idx));
                adjacency[edge.to].push((edge.from, idx));
            }
            Err(mismatch) => {
                let cycle = rebuild_cycle(graph, &adjacency, edge, &mismatch);
                return SolveOutcome::Inconsistent(cycle);
            }
        }
    }

    // Components from the full edge set, ordered by smallest member.
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        groups.entry(plain.find(i)).or_default().push(i);
    }
    let mut member_lists: Vec<Vec<usize>> = groups.into_values().collect();
    member_lists.sort_by_key(|m| m[0]);

    let mut components = Vec::with_capacity(member_lists.len());
    let mut logg = vec![LogValue::NegInfinity; n];
    for members in member_lists {
        let is_zero = node_zero[members[0]];
        let anchor = *members
            .iter()
            .min_by(|&&a, &&b| {
                graph.energies[a]
                    .cmp_by(&graph.energies[b], &graph.basis)
                    .then_with(|| a.cmp(&b))
            })
            .expect("components are non-empty");
        if !is_zero {
            for &m in &members {
                let diff = weighted
                    .difference(anchor, m)
                    .expect("plain and weighted components coincide on nonzero nodes");
                logg[m] = LogValue::Finite(diff);
            }
        }
        components.push(Component {
            anchor,
            members,
            zero: is_zero,
        });
    }
    SolveOutcome::Consistent(EnvAssignment { components, logg })
}

/// Reconstructs the inconsistent cycle for a rejected edge: BFS over the
/// accepted edges from its source to its target, then the edge itself.
fn rebuild_cycle(
    graph: &ConstraintGraph,
    adjacency: &[Vec<(usize, usize)>],
    closing: &Edge,
    mismatch: &Exact,
) -> InconsistencyCertificate {
    let n = graph.node_count();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[closing.from] = true;
    queue.push_back(closing.from);
    while let Some(node) = queue.pop_front() {
        if node == closing.to {
            break;
        }
        for &(next, edge_idx) in &adjacency[node] {
            if !seen[next] {
                seen[next] = true;
                prev[next] = Some((node, edge_idx));
                queue.push_back(next);
            }
        }
    }
    let mut path = Vec::new();
    let mut node = closing.to;
    while let Some((parent, edge_idx)) = prev[node] {
        path.push(graph.edges[edge_idx].clone());
        node = parent;
    }
    path.reverse();
    debug_assert!(
        node == closing.from,
        "conflicting edge endpoints must already be connected"
    );
    // Internal cross-check: the path offsets must reproduce the mismatch.
    #[cfg(debug_assertions)]
    {
        let mut sum = Exact::zero();
        let mut at = closing.from;
        for edge in &path {
            if edge.from == at {
                sum = &sum + &edge.offset;
                at = edge.to;
            } else {
                sum = &sum - &edge.offset;
                at = edge.from;
            }
        }
        debug_assert_eq!(&(&sum - &closing.offset), mismatch);
    }
    path.push(closing.clone());
    InconsistencyCertificate::CycleMismatch {
        cycle: path,
        mismatch: mismatch.clone(),
    }
}

/// Whether the assignment extends to a normalizable state on the infinite
/// lattice behind a multimode truncation.
#[derive(Debug, Clone, PartialEq)]
pub enum SummabilityVerdict {
    /// Every forced direction decays; `truncation_only` is set when some
    /// direction carried no constraints at all (free choice within the
    /// truncation, no statement about a forced extension).
    Normalizable { truncation_only: bool },
    /// Populations along this mode direction are forced to grow (or stay
    /// constant) with the given exact per-step log increment ≥ 0: the sum
    /// over the infinite ladder diverges.
    DivergentDirection { mode: usize, rate: Exact },
    /// A direction shows several distinct forced increments; no single
    /// geometric rate fits the truncation.
    Indeterminate { mode: usize, increments: Vec<Exact> },
}

/// Classifies the per-mode log increments of a solved assignment on a
/// multimode lattice. Increments are collected within components only
/// (different components normalize independently); divergence takes
/// precedence over indeterminacy.
pub fn check_summability(
    assignment: &EnvAssignment,
    env: &MultimodeSpectrum,
) -> Result<SummabilityVerdict> {
    if assignment.logg().len() != env.len() {
        return Err(Error::invalid(
            "assignment and environment lattice sizes differ",
        ));
    }
    if env.truncs().iter().any(|&t| t < 3) {
        return Err(Error::precondition(
            "summability needs at least 3 levels per mode",
        ));
    }
    let basis = env.basis();
    let comp_of = assignment.component_of();
    let modes = env.modes();
    let mut free_mode = false;
    let mut indeterminate: Option<(usize, Vec<Exact>)> = None;
    for mode in 0..modes {
        let stride: usize = env.truncs()[mode + 1..].iter().product();
        let trunc = env.truncs()[mode];
        let mut seen: Vec<Exact> = Vec::new();
        for flat in 0..env.len() {
            let coord = (flat / stride) % trunc;
            if coord + 1 >= trunc {
                continue;
            }
            let next = flat + stride;
            if comp_of[flat] != comp_of[next] {
                continue;
            }
            let (LogValue::Finite(a), LogValue::Finite(b)) =
                (assignment.value(flat), assignment.value(next))
            else {
                continue;
            };
            let inc = b - a;
            if !seen.contains(&inc) {
                seen.push(inc);
            }
        }
        if seen.is_empty() {
            free_mode = true;
            continue;
        }
        let growing: Vec<&Exact> = seen
            .iter()
            .filter(|inc| inc.sign(basis) != std::cmp::Ordering::Less)
            .collect();
        if let Some(&first) = growing.first() {
            let rate = growing
                .iter()
                .fold(first, |best, &inc| {
                    if inc.cmp_by(best, basis) == std::cmp::Ordering::Greater {
                        inc
                    } else {
                        best
                    }
                })
                .clone();
            return Ok(SummabilityVerdict::DivergentDirection { mode, rate });
        }
        if seen.len() > 1 && indeterminate.is_none() {
            indeterminate = Some((mode, seen));
        }
    }
    if let Some((mode, increments)) = indeterminate {
        return Ok(SummabilityVerdict::Indeterminate { mode, increments });
    }
    Ok(SummabilityVerdict::Normalizable {
        truncation_only: free_mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{multimode_spectrum, oscillator_spectrum};
    use crate::rat::{rat, Rat};

    fn int_spectrum(energies: &[i64]) -> Spectrum {
        Spectrum::new(
            Basis::rational(),
            energies.iter().map(|&e| (Exact::integer(e), 1)).collect(),
        )
        .unwrap()
    }

    fn int_state(entries: &[Option<i64>]) -> LogState {
        LogState::from_rationals(
            entries
                .iter()
                .map(|e| e.map(|v| Rat::from_integer(v.into())))
                .collect(),
        )
    }

    fn raw_edge(from: usize, to: usize, offset: i64) -> Edge {
        Edge {
            from,
            to,
            offset: Exact::integer(offset),
            provenance: Provenance::Degeneracy,
        }
    }

    #[test]
    fn degeneracy_classes_group_equal_energies() {
        let basis = Basis::rational();
        let levels = vec![Exact::integer(1), Exact::integer(1), Exact::integer(2)];
        assert_eq!(
            degeneracy_classes(&levels, &basis),
            vec![vec![0, 1], vec![2]]
        );
    }

    #[test]
    fn degeneracy_classes_on_two_mode_box() {
        let basis = Basis::rational();
        let env = multimode_spectrum(
            basis.clone(),
            vec![Exact::integer(1), Exact::integer(1)],
            vec![2, 2],
        )
        .unwrap();
        let classes = degeneracy_classes(env.energies(), &basis);
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 2, 1]);
    }

    #[test]
    fn degeneracy_classes_respect_generator_independence() {
        let basis = Basis::with_generator("sqrt2", std::f64::consts::SQRT_2).unwrap();
        let levels = vec![
            Exact::from_coords(vec![rat(1, 1)]),
            Exact::from_coords(vec![rat(0, 1), rat(1, 1)]),
        ];
        assert_eq!(degeneracy_classes(&levels, &basis), vec![vec![0], vec![1]]);
    }

    #[test]
    fn ratio_graph_matches_ladder_steps() {
        let sys = int_spectrum(&[0, 1]);
        let state = int_state(&[Some(0), Some(-1)]);
        let env = oscillator_spectrum(Basis::rational(), &Exact::integer(1), 3).unwrap();
        let env_energies: Vec<Exact> =
            env.levels().iter().map(|l| l.energy.clone()).collect();
        let graph = build_ratio_graph(&sys, &state, &env_energies).unwrap();
        let summary: Vec<(usize, usize, Exact)> = graph
            .edges()
            .iter()
            .map(|e| (e.from, e.to, e.offset.clone()))
            .collect();
        assert_eq!(
            summary,
            vec![
                (0, 1, Exact::integer(-1)),
                (1, 2, Exact::integer(-1)),
            ]
        );
    }

    #[test]
    fn ratio_graph_is_empty_across_independent_generators() {
        let basis = Basis::with_generator("sqrt2", std::f64::consts::SQRT_2).unwrap();
        let sys = Spectrum::new(
            basis.clone(),
            vec![(Exact::zero(), 1), (Exact::integer(1), 1)],
        )
        .unwrap();
        let state = int_state(&[Some(0), Some(-1)]);
        let omega = Exact::from_coords(vec![rat(0, 1), rat(1, 1)]);
        let env = oscillator_spectrum(basis, &omega, 3).unwrap();
        let env_energies: Vec<Exact> =
            env.levels().iter().map(|l| l.energy.clone()).collect();
        let graph = build_ratio_graph(&sys, &state, &env_energies).unwrap();
        assert!(graph.edges().is_empty(), "no exact coincidences exist");
    }

    #[test]
    fn conflicting_gap_offsets_produce_cycle_certificate() {
        let sys = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-1), Some(-4)]);
        let env = oscillator_spectrum(Basis::rational(), &Exact::integer(1), 4).unwrap();
        let env_energies: Vec<Exact> =
            env.levels().iter().map(|l| l.energy.clone()).collect();
        let graph = build_ratio_graph(&sys, &state, &env_energies).unwrap();
        let SolveOutcome::Inconsistent(InconsistencyCertificate::CycleMismatch {
            cycle,
            mismatch,
        }) = solve_env_state(&graph)
        else {
            panic!("over-constrained ladder must be inconsistent");
        };
        assert_eq!(mismatch, Exact::integer(2), "path -1-1 against edge -4");
        assert_eq!(cycle.len(), 3, "two ladder steps plus the closing edge");
        let closing = cycle.last().unwrap();
        assert_eq!((closing.from, closing.to), (0, 2));
        assert_eq!(closing.offset, Exact::integer(-4));
    }

    #[test]
    fn solve_resolves_simple_chain() {
        let basis = Basis::rational();
        let energies = vec![Exact::integer(0), Exact::integer(1), Exact::integer(2)];
        let graph = ConstraintGraph::new(
            basis,
            energies,
            vec![raw_edge(0, 1, -1), raw_edge(1, 2, -1)],
            vec![],
        )
        .unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("chain is consistent");
        };
        assert_eq!(
            assignment.logg(),
            &[
                LogValue::integer(0),
                LogValue::integer(-1),
                LogValue::integer(-2),
            ]
        );
        assert_eq!(assignment.components().len(), 1);
        assert_eq!(assignment.components()[0].anchor, 0);
    }

    #[test]
    fn solve_keeps_singletons_anchored_at_zero() {
        let basis = Basis::rational();
        let energies = vec![Exact::integer(0), Exact::integer(1), Exact::integer(2)];
        let graph = ConstraintGraph::new(basis, energies, vec![], vec![]).unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("empty graph is consistent");
        };
        assert_eq!(assignment.components().len(), 3);
        assert!(assignment
            .logg()
            .iter()
            .all(|v| v == &LogValue::integer(0)));
    }

    #[test]
    fn zero_marks_black_out_whole_components() {
        let basis = Basis::rational();
        let energies = vec![
            Exact::integer(0),
            Exact::integer(1),
            Exact::integer(5),
            Exact::integer(6),
        ];
        let graph = ConstraintGraph::new(
            basis,
            energies,
            vec![raw_edge(0, 1, -1), raw_edge(2, 3, -1)],
            vec![ZeroMark {
                node: 3,
                sys_zero: 2,
                sys_finite: 0,
            }],
        )
        .unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("zeroing a component is not an inconsistency");
        };
        assert_eq!(assignment.value(0), &LogValue::integer(0));
        assert_eq!(assignment.value(1), &LogValue::integer(-1));
        assert_eq!(assignment.value(2), &LogValue::NegInfinity);
        assert_eq!(assignment.value(3), &LogValue::NegInfinity);
        assert!(assignment.components()[1].zero);
    }

    #[test]
    fn zeroing_every_component_is_no_support() {
        let basis = Basis::rational();
        let energies = vec![Exact::integer(0), Exact::integer(1)];
        let graph = ConstraintGraph::new(
            basis,
            energies,
            vec![raw_edge(0, 1, -1)],
            vec![ZeroMark {
                node: 0,
                sys_zero: 1,
                sys_finite: 0,
            }],
        )
        .unwrap();
        let SolveOutcome::Inconsistent(InconsistencyCertificate::NoSupport { marks }) =
            solve_env_state(&graph)
        else {
            panic!("an environment with no support left is inconsistent");
        };
        assert_eq!(marks.len(), 1);
    }

    #[test]
    fn zero_component_offsets_are_vacuous() {
        // The two edges into node 2 disagree, but the whole component is
        // zeroed, so no cycle certificate should be raised.
        let basis = Basis::rational();
        let energies = vec![
            Exact::integer(0),
            Exact::integer(1),
            Exact::integer(2),
            Exact::integer(10),
        ];
        let graph = ConstraintGraph::new(
            basis,
            energies,
            vec![raw_edge(0, 1, -1), raw_edge(1, 2, -1), raw_edge(0, 2, -4)],
            vec![ZeroMark {
                node: 0,
                sys_zero: 2,
                sys_finite: 1,
            }],
        )
        .unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("zeroed component makes the conflict vacuous");
        };
        assert_eq!(assignment.value(2), &LogValue::NegInfinity);
        assert_eq!(assignment.value(3), &LogValue::integer(0));
    }

    #[test]
    fn thermal_ladder_assignment_is_normalizable() {
        let sys = int_spectrum(&[0, 1, 2]);
        let state = int_state(&[Some(0), Some(-1), Some(-2)]);
        let basis = Basis::rational();
        let env = multimode_spectrum(basis, vec![Exact::integer(1)], vec![5]).unwrap();
        let graph = build_ratio_graph(&sys, &state, env.energies()).unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("thermal ladder is consistent");
        };
        assert_eq!(
            check_summability(&assignment, &env).unwrap(),
            SummabilityVerdict::Normalizable {
                truncation_only: false
            }
        );
        assert_eq!(assignment.value(4), &LogValue::integer(-4));
    }

    #[test]
    fn unconstrained_lattice_is_normalizable_at_truncation_only() {
        let basis = Basis::with_generator("sqrt2", std::f64::consts::SQRT_2).unwrap();
        let sys = Spectrum::new(
            basis.clone(),
            vec![(Exact::zero(), 1), (Exact::integer(1), 1)],
        )
        .unwrap();
        let state = int_state(&[Some(0), Some(-1)]);
        let omega = Exact::from_coords(vec![rat(0, 1), rat(1, 1)]);
        let env = multimode_spectrum(basis, vec![omega], vec![4]).unwrap();
        let graph = build_ratio_graph(&sys, &state, env.energies()).unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("empty graph is consistent");
        };
        assert_eq!(
            check_summability(&assignment, &env).unwrap(),
            SummabilityVerdict::Normalizable {
                truncation_only: true
            }
        );
    }

    #[test]
    fn growing_direction_is_divergent() {
        let basis = Basis::rational();
        let env = multimode_spectrum(basis.clone(), vec![Exact::integer(1)], vec![4]).unwrap();
        let graph = ConstraintGraph::new(
            basis,
            env.energies().to_vec(),
            vec![raw_edge(0, 1, 1), raw_edge(1, 2, 1), raw_edge(2, 3, 1)],
            vec![],
        )
        .unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("growing chain is consistent as a finite system");
        };
        assert_eq!(
            check_summability(&assignment, &env).unwrap(),
            SummabilityVerdict::DivergentDirection {
                mode: 0,
                rate: Exact::integer(1)
            }
        );
    }

    #[test]
    fn mixed_increments_are_indeterminate() {
        let basis = Basis::rational();
        let env = multimode_spectrum(basis.clone(), vec![Exact::integer(1)], vec![4]).unwrap();
        let graph = ConstraintGraph::new(
            basis,
            env.energies().to_vec(),
            vec![raw_edge(0, 1, -1), raw_edge(1, 2, -2), raw_edge(2, 3, -1)],
            vec![],
        )
        .unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("decaying chain is consistent");
        };
        let SummabilityVerdict::Indeterminate { mode, increments } =
            check_summability(&assignment, &env).unwrap()
        else {
            panic!("distinct increments cannot fit one geometric rate");
        };
        assert_eq!(mode, 0);
        assert_eq!(increments.len(), 2);
    }

    #[test]
    fn summability_requires_three_levels_per_mode() {
        let basis = Basis::rational();
        let env = multimode_spectrum(basis.clone(), vec![Exact::integer(1)], vec![2]).unwrap();
        let graph =
            ConstraintGraph::new(basis, env.energies().to_vec(), vec![], vec![]).unwrap();
        let SolveOutcome::Consistent(assignment) = solve_env_state(&graph) else {
            panic!("empty graph is consistent");
        };
        assert!(check_summability(&assignment, &env).is_err());
    }
}
