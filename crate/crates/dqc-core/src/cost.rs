//! Teleportation-cost evaluation for a partitioned basic-library circuit.
//!
//! A configuration assigns each global CNOT an execution side. Local gates
//! run where their qubits live, so a qubit teleported away must come back
//! before any local gate can use it. The evaluators count one unit per
//! one-way qubit move, including the final returns home.
//!
//! Three evaluators share one engine:
//! - `evaluate_cost`: greedy schedule that may execute any gate commuting
//!   with every earlier unexecuted gate, preferring gates whose operands are
//!   already in place.
//! - `evaluate_cost_linear`: strict circuit order, no reordering.
//! - `brute_force_min_cost`: exact minimum over all schedules the
//!   commutation rule admits, by memoized depth-first search. Exponential,
//!   capped, intended for testing.

use std::collections::{BTreeSet, HashMap};

use crate::circuit::{Circuit, Gate, GateKind, QubitId, SingleQubitGate};
use crate::error::{Error, Result};
use crate::partition::{classify_gates, GateClassification, PartitionAssignment, Side};

/// Default gate-count cap for the brute-force oracle.
pub const DEFAULT_ORACLE_CAP: usize = 14;

/// Execution-side choice per global gate; bit i belongs to the i-th global
/// gate in circuit order. 0 executes in A, 1 in B.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Configuration {
    bits: Vec<bool>,
}

impl Configuration {
    pub fn new(bits: Vec<bool>) -> Self {
        Configuration { bits }
    }

    pub fn empty() -> Self {
        Configuration { bits: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    /// Execution side encoded by bit i.
    pub fn side(&self, i: usize) -> Side {
        if self.bits[i] {
            Side::B
        } else {
            Side::A
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn complement(&self) -> Self {
        Configuration {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Decodes `value` as a bitstring, most significant bit first, so
    /// numeric order matches lexicographic bitstring order.
    pub fn from_index(value: u64, len: usize) -> Self {
        Configuration {
            bits: (0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1).collect(),
        }
    }

    pub fn from_bitstring(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "configuration may contain only 0 and 1, found '{other}'"
                    )))
                }
            }
        }
        Ok(Configuration { bits })
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
    }

    pub fn random<R: rand::Rng>(len: usize, rng: &mut R) -> Self {
        Configuration {
            bits: (0..len).map(|_| rng.gen_bool(0.5)).collect(),
        }
    }
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Teleport every migrated qubit back after the last gate.
    pub return_home_at_end: bool,
    /// Commutation-aware reordering; false evaluates in strict circuit order.
    pub lookahead: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            return_home_at_end: true,
            lookahead: true,
        }
    }
}

/// Where an operand must sit for a gate to execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Home,
    Away,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    HomeToAway,
    AwayToHome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventPoint {
    /// Move made to execute the gate at this index.
    Gate(usize),
    /// Final return after all gates.
    End,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TeleportEvent {
    pub at: EventPoint,
    pub qubit: usize,
    pub direction: Direction,
}

/// Cost plus the trace that produced it. `teleportations` always equals
/// `events.len()`, and `schedule` is a permutation of the gate indices.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CostReport {
    pub teleportations: u32,
    pub schedule: Vec<usize>,
    pub events: Vec<TeleportEvent>,
}

/// Symbolic commutation test for basic gates. TRUE only when the pair is
/// guaranteed to commute; unknown shared-operand pairs report FALSE.
pub fn commutes(a: &Gate, b: &Gate) -> Result<bool> {
    if !a.is_basic() || !b.is_basic() {
        return Err(Error::InvalidArgument(
            "commutation is defined for basic gates only".into(),
        ));
    }
    Ok(commutes_basic(a, b))
}

fn commutes_basic(a: &Gate, b: &Gate) -> bool {
    match (&a.kind, &b.kind) {
        (GateKind::Single(u), GateKind::Single(v)) => {
            a.target != b.target || (u.is_diagonal() && v.is_diagonal()) || u == v
        }
        (GateKind::Single(u), GateKind::Cnot) => single_vs_cnot(*u, a.target, b),
        (GateKind::Cnot, GateKind::Single(v)) => single_vs_cnot(*v, b.target, a),
        (GateKind::Cnot, GateKind::Cnot) => {
            a.target != b.controls[0] && b.target != a.controls[0]
        }
        _ => unreachable!("checked basic"),
    }
}

fn single_vs_cnot(u: SingleQubitGate, q: QubitId, cnot: &Gate) -> bool {
    let control = cnot.controls[0];
    let target = cnot.target;
    if q == control {
        u.is_diagonal()
    } else if q == target {
        u == SingleQubitGate::X
    } else {
        true
    }
}

/// Per-operand placement a gate demands: single-qubit and local CNOT gates
/// need every operand home; a global CNOT needs the operand homed on its
/// execution side in place and the other operand migrated over.
pub fn required_sites(
    gate: &Gate,
    gate_index: usize,
    assignment: &PartitionAssignment,
    classification: &GateClassification,
    cfg: &Configuration,
) -> Result<Vec<(QubitId, Site)>> {
    match gate.kind {
        GateKind::Single(_) => Ok(vec![(gate.target, Site::Home)]),
        GateKind::Cnot => {
            let control = gate.controls[0];
            match classification.global_ordinal(gate_index) {
                None => Ok(vec![(control, Site::Home), (gate.target, Site::Home)]),
                Some(ordinal) => {
                    if ordinal >= cfg.len() {
                        return Err(Error::ConfigLength {
                            expected: classification.m_g(),
                            got: cfg.len(),
                        });
                    }
                    let exec = cfg.side(ordinal);
                    let control_home = assignment.side_of(control.0);
                    let (c_site, t_site) = if control_home == exec {
                        (Site::Home, Site::Away)
                    } else {
                        (Site::Away, Site::Home)
                    };
                    Ok(vec![(control, c_site), (gate.target, t_site)])
                }
            }
        }
        _ => Err(Error::InvalidArgument(
            "required sites are defined for basic gates only".into(),
        )),
    }
}

/// Checks that a schedule only ever ran gates that commuted with every
/// earlier-indexed gate still pending at that moment.
pub fn schedule_is_valid(circuit: &Circuit, schedule: &[usize]) -> bool {
    let m = circuit.len();
    if schedule.len() != m {
        return false;
    }
    let mut executed = vec![false; m];
    for &j in schedule {
        if j >= m || executed[j] {
            return false;
        }
        for i in 0..j {
            if !executed[i] && !commutes_basic(&circuit.gates()[i], &circuit.gates()[j]) {
                return false;
            }
        }
        executed[j] = true;
    }
    true
}

/// Placement demanded of one gate, pre-resolved for fast evaluation.
#[derive(Debug, Clone, Copy)]
enum GateDemand {
    /// Single-qubit gate: its wire must be home.
    Home1(usize),
    /// Local CNOT: both wires home.
    Home2(usize, usize),
    /// Global CNOT: (control, target, control_home, configuration ordinal).
    Global(usize, usize, Side, usize),
}

/// Precomputed scheduling state for one circuit/partition pair. Construction
/// is O(gates^2); each evaluation after that touches only per-call state, so
/// one evaluator can serve many configurations, concurrently if shared.
pub struct CostEvaluator<'a> {
    circuit: &'a Circuit,
    classification: GateClassification,
    demands: Vec<GateDemand>,
    /// For gate i, the later gates that do not commute with it.
    nc_after: Vec<Vec<u32>>,
    /// For gate j, how many earlier gates do not commute with it.
    init_blockers: Vec<u32>,
    n_qubits: usize,
}

impl<'a> CostEvaluator<'a> {
    pub fn new(circuit: &'a Circuit, assignment: &'a PartitionAssignment) -> Result<Self> {
        if let Some(index) = circuit.first_non_basic() {
            return Err(Error::NonBasic { index });
        }
        if assignment.n() < circuit.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "partition covers {} qubits, circuit has {}",
                assignment.n(),
                circuit.n_qubits
            )));
        }
        let classification = classify_gates(circuit, assignment);
        let m = circuit.len();

        let mut demands = Vec::with_capacity(m);
        for (index, gate) in circuit.gates().iter().enumerate() {
            let demand = match gate.kind {
                GateKind::Single(_) => GateDemand::Home1(gate.target.0),
                GateKind::Cnot => {
                    let control = gate.controls[0].0;
                    match classification.global_ordinal(index) {
                        None => GateDemand::Home2(control, gate.target.0),
                        Some(ordinal) => GateDemand::Global(
                            control,
                            gate.target.0,
                            assignment.side_of(control),
                            ordinal,
                        ),
                    }
                }
                _ => unreachable!("checked basic"),
            };
            demands.push(demand);
        }

        let mut nc_after = vec![Vec::new(); m];
        let mut init_blockers = vec![0u32; m];
        let gates = circuit.gates();
        for i in 0..m {
            for j in i + 1..m {
                // Disjoint pairs always commute; skip the table.
                if !gates[i].operands().any(|q| gates[j].touches(q)) {
                    continue;
                }
                if !commutes_basic(&gates[i], &gates[j]) {
                    nc_after[i].push(j as u32);
                    init_blockers[j] += 1;
                }
            }
        }

        Ok(CostEvaluator {
            circuit,
            classification,
            demands,
            nc_after,
            init_blockers,
            n_qubits: circuit.n_qubits,
        })
    }

    pub fn classification(&self) -> &GateClassification {
        &self.classification
    }

    pub fn m_g(&self) -> usize {
        self.classification.m_g()
    }

    fn check_len(&self, cfg: &Configuration) -> Result<()> {
        if cfg.len() != self.m_g() {
            return Err(Error::ConfigLength {
                expected: self.m_g(),
                got: cfg.len(),
            });
        }
        Ok(())
    }

    /// Required placements for gate `j`: (qubit, must_be_home) pairs.
    fn requirement(&self, j: usize, cfg: &Configuration) -> RequirementIter {
        let (pairs, len) = match self.demands[j] {
            GateDemand::Home1(q) => ([(q, true), (0, true)], 1),
            GateDemand::Home2(a, b) => ([(a, true), (b, true)], 2),
            GateDemand::Global(control, target, control_home, ordinal) => {
                let control_stays = control_home == cfg.side(ordinal);
                ([(control, control_stays), (target, !control_stays)], 2)
            }
        };
        RequirementIter {
            pairs,
            len,
            next: 0,
        }
    }

    fn satisfied(&self, j: usize, cfg: &Configuration, at_home: &[bool]) -> bool {
        self.requirement(j, cfg).all(|(q, home)| at_home[q] == home)
    }

    /// Teleportation count only; no trace is built.
    pub fn cost(&self, cfg: &Configuration, opt: EvalOptions) -> Result<u32> {
        self.check_len(cfg)?;
        Ok(self.run(cfg, opt, false).0)
    }

    /// Full report with schedule and per-move events.
    pub fn report(&self, cfg: &Configuration, opt: EvalOptions) -> Result<CostReport> {
        self.check_len(cfg)?;
        let (tc, trace) = self.run(cfg, opt, true);
        let (schedule, events) = trace.expect("trace requested");
        Ok(CostReport {
            teleportations: tc,
            schedule,
            events,
        })
    }

    #[allow(clippy::type_complexity)]
    fn run(
        &self,
        cfg: &Configuration,
        opt: EvalOptions,
        collect: bool,
    ) -> (u32, Option<(Vec<usize>, Vec<TeleportEvent>)>) {
        let m = self.circuit.len();
        let mut at_home = vec![true; self.n_qubits];
        let mut tc = 0u32;
        let mut trace = if collect {
            Some((Vec::with_capacity(m), Vec::new()))
        } else {
            None
        };

        let run_gate = |j: usize,
                            at_home: &mut [bool],
                            tc: &mut u32,
                            trace: &mut Option<(Vec<usize>, Vec<TeleportEvent>)>| {
            for (q, home) in self.requirement(j, cfg) {
                if at_home[q] == home {
                    continue;
                }
                let direction = if at_home[q] {
                    Direction::HomeToAway
                } else {
                    Direction::AwayToHome
                };
                at_home[q] = !at_home[q];
                *tc += 1;
                if let Some((_, events)) = trace {
                    events.push(TeleportEvent {
                        at: EventPoint::Gate(j),
                        qubit: q,
                        direction,
                    });
                }
            }
            if let Some((schedule, _)) = trace {
                schedule.push(j);
            }
        };

        if opt.lookahead {
            let mut blockers = self.init_blockers.clone();
            let mut executed = vec![false; m];
            let mut available: BTreeSet<u32> = (0..m as u32)
                .filter(|&j| blockers[j as usize] == 0)
                .collect();
            for _ in 0..m {
                let mut chosen = None;
                for &j in &available {
                    if self.satisfied(j as usize, cfg, &at_home) {
                        chosen = Some(j);
                        break;
                    }
                }
                let j = chosen.unwrap_or_else(|| {
                    *available.iter().next().expect("pending gates stay reachable")
                });
                available.remove(&j);
                let j = j as usize;
                run_gate(j, &mut at_home, &mut tc, &mut trace);
                executed[j] = true;
                for &k in &self.nc_after[j] {
                    blockers[k as usize] -= 1;
                    if blockers[k as usize] == 0 && !executed[k as usize] {
                        available.insert(k);
                    }
                }
            }
        } else {
            for j in 0..m {
                run_gate(j, &mut at_home, &mut tc, &mut trace);
            }
        }

        if opt.return_home_at_end {
            for (q, home) in at_home.iter().enumerate() {
                if !home {
                    tc += 1;
                    if let Some((_, events)) = &mut trace {
                        events.push(TeleportEvent {
                            at: EventPoint::End,
                            qubit: q,
                            direction: Direction::AwayToHome,
                        });
                    }
                }
            }
        }
        (tc, trace)
    }

    /// Exact minimum over every schedule the availability rule admits.
    pub fn brute_force(
        &self,
        cfg: &Configuration,
        opt: EvalOptions,
        cap: usize,
    ) -> Result<CostReport> {
        self.check_len(cfg)?;
        let m = self.circuit.len();
        if m > cap {
            return Err(Error::OverCap {
                what: "gate count",
                value: m,
                cap,
                hint: "the exhaustive schedule oracle is exponential; use evaluate_cost",
            });
        }
        if self.n_qubits > 63 {
            return Err(Error::OverCap {
                what: "qubit count",
                value: self.n_qubits,
                cap: 63,
                hint: "the schedule oracle packs locations into a 64-bit mask",
            });
        }

        // For gate j, the mask of earlier gates that must execute first.
        let mut nc_before = vec![0u64; m];
        for i in 0..m {
            for &j in &self.nc_after[i] {
                nc_before[j as usize] |= 1 << i;
            }
        }
        let full: u64 = if m == 0 { 0 } else { (1 << m) - 1 };
        let home_mask: u64 = (1u64 << self.n_qubits) - 1;

        let mut dfs = Dfs {
            eval: self,
            cfg,
            return_home: opt.return_home_at_end,
            nc_before,
            full,
            home_mask,
            m,
            memo: HashMap::new(),
        };
        let best = dfs.solve(0, home_mask);

        // Walk one optimal path again for the trace, lowest index first.
        let mut schedule = Vec::with_capacity(m);
        let mut events = Vec::new();
        let mut executed = 0u64;
        let mut at_home = home_mask;
        let mut remaining = best;
        while executed != full {
            let mut picked = None;
            for j in 0..m {
                if executed >> j & 1 == 1 || dfs.nc_before[j] & !executed != 0 {
                    continue;
                }
                let (cost, next_home) = dfs.moves(j, at_home);
                let rest = dfs.solve(executed | 1 << j, next_home);
                if cost + rest == remaining {
                    picked = Some((j, cost, next_home));
                    break;
                }
            }
            let (j, cost, next_home) = picked.expect("an optimal branch exists");
            for (q, home) in self.requirement(j, cfg) {
                let was_home = at_home >> q & 1 == 1;
                if was_home != home {
                    events.push(TeleportEvent {
                        at: EventPoint::Gate(j),
                        qubit: q,
                        direction: if was_home {
                            Direction::HomeToAway
                        } else {
                            Direction::AwayToHome
                        },
                    });
                }
            }
            schedule.push(j);
            executed |= 1 << j;
            at_home = next_home;
            remaining -= cost;
        }
        if opt.return_home_at_end {
            for q in 0..self.n_qubits {
                if at_home >> q & 1 == 0 {
                    events.push(TeleportEvent {
                        at: EventPoint::End,
                        qubit: q,
                        direction: Direction::AwayToHome,
                    });
                }
            }
        }

        Ok(CostReport {
            teleportations: best,
            schedule,
            events,
        })
    }
}

struct RequirementIter {
    pairs: [(usize, bool); 2],
    len: usize,
    next: usize,
}

impl Iterator for RequirementIter {
    type Item = (usize, bool);

    fn next(&mut self) -> Option<(usize, bool)> {
        if self.next < self.len {
            let item = self.pairs[self.next];
            self.next += 1;
            Some(item)
        } else {
            None
        }
    }
}

struct Dfs<'b, 'a> {
    eval: &'b CostEvaluator<'a>,
    cfg: &'b Configuration,
    return_home: bool,
    nc_before: Vec<u64>,
    full: u64,
    home_mask: u64,
    m: usize,
    memo: HashMap<(u64, u64), u32>,
}

impl Dfs<'_, '_> {
    fn moves(&self, j: usize, at_home: u64) -> (u32, u64) {
        let mut cost = 0;
        let mut next = at_home;
        for (q, home) in self.eval.requirement(j, self.cfg) {
            let is_home = at_home >> q & 1 == 1;
            if is_home != home {
                cost += 1;
                next ^= 1 << q;
            }
        }
        (cost, next)
    }

    fn solve(&mut self, executed: u64, at_home: u64) -> u32 {
        if executed == self.full {
            return if self.return_home {
                (at_home ^ self.home_mask).count_ones()
            } else {
                0
            };
        }
        if let Some(&v) = self.memo.get(&(executed, at_home)) {
            return v;
        }
        let mut best = u32::MAX;
        for j in 0..self.m {
            if executed >> j & 1 == 1 {
                continue;
            }
            if self.nc_before[j] & !executed != 0 {
                continue;
            }
            let (cost, next_home) = self.moves(j, at_home);
            let total = cost + self.solve(executed | 1 << j, next_home);
            if total < best {
                best = total;
            }
        }
        self.memo.insert((executed, at_home), best);
        best
    }
}

/// Greedy commutation-aware teleportation count for one configuration.
pub fn evaluate_cost(
    circuit: &Circuit,
    assignment: &PartitionAssignment,
    cfg: &Configuration,
    opt: EvalOptions,
) -> Result<CostReport> {
    CostEvaluator::new(circuit, assignment)?.report(cfg, opt)
}

/// Strict circuit-order baseline: no commutation lookahead.
pub fn evaluate_cost_linear(
    circuit: &Circuit,
    assignment: &PartitionAssignment,
    cfg: &Configuration,
    opt: EvalOptions,
) -> Result<CostReport> {
    let opt = EvalOptions {
        lookahead: false,
        ..opt
    };
    CostEvaluator::new(circuit, assignment)?.report(cfg, opt)
}

/// Exact schedule oracle; refuses circuits above `DEFAULT_ORACLE_CAP` gates.
pub fn brute_force_min_cost(
    circuit: &Circuit,
    assignment: &PartitionAssignment,
    cfg: &Configuration,
    opt: EvalOptions,
) -> Result<CostReport> {
    brute_force_min_cost_capped(circuit, assignment, cfg, opt, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_min_cost_capped(
    circuit: &Circuit,
    assignment: &PartitionAssignment,
    cfg: &Configuration,
    opt: EvalOptions,
    cap: usize,
) -> Result<CostReport> {
    CostEvaluator::new(circuit, assignment)?.brute_force(cfg, opt, cap)
}
