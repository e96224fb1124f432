//! Bounded equational search over interchange normal forms.
//!
//! States are normal forms. A step picks a representative of the current
//! class, finds one side of an equation instance as a contiguous window of
//! slices shifted by a wire offset, and replaces it by the other side.
//! Search runs from both ends; a proof is the list of steps, which
//! [`check_trace`] replays independently of the search.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::diagram::{class, normalize, Diagram, Slice};
use super::{sort_of, Equation, GenId, MonTerm, MonTheory, TheoryError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProverConfig {
    /// Expanded states before giving up.
    pub budget: usize,
    /// Slices allowed beyond the larger endpoint.
    pub max_extra_slices: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig { budget: 10_000, max_extra_slices: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    /// `true` rewrites left side to right side.
    pub forward: bool,
    /// Representative of the source class holding the window.
    pub before: Vec<Slice>,
    pub at: usize,
    pub offset: usize,
    /// `before` with the window replaced.
    pub after: Vec<Slice>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub start: Diagram,
    pub end: Diagram,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Proved(Trace),
    /// Only for theories without equations: distinct normal forms.
    Refuted,
    /// `exhausted` means every state under the slice cap was visited.
    Unknown { explored: usize, exhausted: bool },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }
}

/// Equation instances as normal-form diagrams, indexed for matching.
pub struct Rules<'a> {
    th: &'a MonTheory,
    pub rules: Vec<(String, Diagram, Diagram)>,
    by_head: HashMap<GenId, Vec<(usize, bool)>>,
    empty: Vec<(usize, bool)>,
}

impl<'a> Rules<'a> {
    pub fn new(th: &'a MonTheory) -> Self {
        Rules::from_equations(th, th.instances())
    }

    pub fn from_equations(th: &'a MonTheory, eqs: Vec<Equation>) -> Self {
        let mut rules = Vec::new();
        let mut by_head: HashMap<GenId, Vec<(usize, bool)>> = HashMap::new();
        let mut empty = Vec::new();
        for e in eqs {
            let l = normalize(&th.sig, &Diagram::from_term(&th.sig, &e.lhs));
            let r = normalize(&th.sig, &Diagram::from_term(&th.sig, &e.rhs));
            if l == r {
                continue;
            }
            let i = rules.len();
            for (side, fwd) in [(&l, true), (&r, false)] {
                match side.slices.first() {
                    Some(&(_, g)) => by_head.entry(g).or_default().push((i, fwd)),
                    None => empty.push((i, fwd)),
                }
            }
            rules.push((e.name, l, r));
        }
        Rules { th, rules, by_head, empty }
    }

    fn sides(&self, i: usize, fwd: bool) -> (&Diagram, &Diagram) {
        let (_, l, r) = &self.rules[i];
        if fwd {
            (l, r)
        } else {
            (r, l)
        }
    }

    fn matches_at(&self, rep: &[Slice], levels: &[super::Word], side: &Diagram, at: usize, k: usize) -> bool {
        let n = side.slices.len();
        if at + n > rep.len() || k + side.dom.len() > levels[at].len() {
            return false;
        }
        levels[at][k..k + side.dom.len()] == side.dom[..]
            && side.slices.iter().zip(&rep[at..at + n]).all(|(&(o, g), &(o2, g2))| g == g2 && o + k == o2)
    }

    fn rewrite(rep: &[Slice], at: usize, k: usize, from: &Diagram, to: &Diagram) -> Vec<Slice> {
        let mut out = rep[..at].to_vec();
        out.extend(to.slices.iter().map(|&(o, g)| (o + k, g)));
        out.extend_from_slice(&rep[at + from.slices.len()..]);
        out
    }

    /// Every one-step rewrite of a state, deduplicated by target.
    pub fn neighbours(&self, state: &Diagram, max_slices: usize) -> Vec<(Diagram, Step)> {
        let sig = &self.th.sig;
        let mut out: Vec<(Diagram, Step)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for rep in class(sig, &state.slices) {
            let d = Diagram { dom: state.dom.clone(), cod: state.cod.clone(), slices: rep.clone() };
            let levels = d.levels(sig);
            let mut push = |i: usize, fwd: bool, at: usize, k: usize| {
                let (from, to) = self.sides(i, fwd);
                if rep.len() - from.slices.len() + to.slices.len() > max_slices {
                    return;
                }
                let after = Self::rewrite(&rep, at, k, from, to);
                let nd = normalize(sig, &Diagram { dom: state.dom.clone(), cod: state.cod.clone(), slices: after.clone() });
                if seen.insert(nd.slices.clone()) {
                    let step = Step { rule: self.rules[i].0.clone(), forward: fwd, before: rep.clone(), at, offset: k, after };
                    out.push((nd, step));
                }
            };
            for at in 0..rep.len() {
                let Some(cands) = self.by_head.get(&rep[at].1) else { continue };
                for &(i, fwd) in cands {
                    let (from, _) = self.sides(i, fwd);
                    let k0 = rep[at].0;
                    let Some(k) = k0.checked_sub(from.slices[0].0) else { continue };
                    if self.matches_at(&rep, &levels, from, at, k) {
                        push(i, fwd, at, k);
                    }
                }
            }
            for &(i, fwd) in &self.empty {
                let (from, _) = self.sides(i, fwd);
                for at in 0..=rep.len() {
                    for k in 0..=levels[at].len() {
                        if self.matches_at(&rep, &levels, from, at, k) {
                            push(i, fwd, at, k);
                        }
                    }
                }
            }
        }
        out
    }
}

type Parents = HashMap<Vec<Slice>, Option<(Vec<Slice>, Step)>>;

fn path_to(parents: &Parents, end: &[Slice]) -> Vec<Step> {
    let mut steps = Vec::new();
    let mut cur = end.to_vec();
    while let Some(Some((prev, step))) = parents.get(&cur) {
        steps.push(step.clone());
        cur = prev.clone();
    }
    steps.reverse();
    steps
}

fn reversed(s: &Step) -> Step {
    Step {
        rule: s.rule.clone(),
        forward: !s.forward,
        before: s.after.clone(),
        at: s.at,
        offset: s.offset,
        after: s.before.clone(),
    }
}

/// Bidirectional breadth-first search between two parallel diagrams.
pub fn prove_diagrams(th: &MonTheory, a: &Diagram, b: &Diagram, cfg: &ProverConfig) -> Verdict {
    let rules = Rules::new(th);
    prove_with(&rules, a, b, cfg)
}

pub fn prove_with(rules: &Rules<'_>, a: &Diagram, b: &Diagram, cfg: &ProverConfig) -> Verdict {
    let sig = &rules.th.sig;
    let a = normalize(sig, a);
    let b = normalize(sig, b);
    if a == b {
        return Verdict::Proved(Trace { start: a, end: b, steps: Vec::new() });
    }
    if rules.rules.is_empty() {
        return Verdict::Refuted;
    }
    let max_slices = a.slices.len().max(b.slices.len()) + cfg.max_extra_slices;
    let mut par: [Parents; 2] = [HashMap::new(), HashMap::new()];
    let mut queue: [VecDeque<Diagram>; 2] = [VecDeque::new(), VecDeque::new()];
    par[0].insert(a.slices.clone(), None);
    par[1].insert(b.slices.clone(), None);
    queue[0].push_back(a.clone());
    queue[1].push_back(b.clone());
    let mut explored = 0;
    while !queue[0].is_empty() || !queue[1].is_empty() {
        if explored >= cfg.budget {
            return Verdict::Unknown { explored, exhausted: false };
        }
        let side = if queue[1].is_empty() || (!queue[0].is_empty() && queue[0].len() <= queue[1].len()) { 0 } else { 1 };
        let state = queue[side].pop_front().expect("non-empty queue");
        explored += 1;
        for (next, step) in rules.neighbours(&state, max_slices) {
            if par[side].contains_key(&next.slices) {
                continue;
            }
            par[side].insert(next.slices.clone(), Some((state.slices.clone(), step)));
            if par[1 - side].contains_key(&next.slices) {
                let (fwd, bwd) = (&par[0], &par[1]);
                let mut steps = path_to(fwd, &next.slices);
                steps.extend(path_to(bwd, &next.slices).iter().rev().map(reversed));
                return Verdict::Proved(Trace { start: a, end: b, steps });
            }
            queue[side].push_back(next);
        }
    }
    Verdict::Unknown { explored, exhausted: true }
}

/// Sort-checks and normalises, then searches.
pub fn prove_equal(th: &MonTheory, lhs: &MonTerm, rhs: &MonTerm, cfg: &ProverConfig) -> Result<Verdict, TheoryError> {
    let (s1, s2) = (sort_of(&th.sig, lhs)?, sort_of(&th.sig, rhs)?);
    if s1 != s2 {
        return Err(TheoryError::NotParallel {
            name: "goal".into(),
            lhs: lhs.display(&th.sig).to_string(),
            rhs: rhs.display(&th.sig).to_string(),
        });
    }
    let d = |t| Diagram::from_term(&th.sig, t);
    Ok(prove_diagrams(th, &d(lhs), &d(rhs), cfg))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("step {0}: unknown rule `{1}`")]
    UnknownRule(usize, String),
    #[error("step {0}: representative is not in the current class")]
    WrongClass(usize),
    #[error("step {0}: rule side does not occur at the given window")]
    NoMatch(usize),
    #[error("step {0}: rewritten representative differs")]
    WrongResult(usize),
    #[error("trace ends at a different normal form")]
    WrongEnd,
}

/// Replays every step against the theory's equation instances.
pub fn check_trace(th: &MonTheory, trace: &Trace) -> Result<(), TraceError> {
    let rules = Rules::new(th);
    let sig = &th.sig;
    let mut cur = normalize(sig, &trace.start);
    for (n, s) in trace.steps.iter().enumerate() {
        let i = rules
            .rules
            .iter()
            .position(|r| r.0 == s.rule)
            .ok_or_else(|| TraceError::UnknownRule(n, s.rule.clone()))?;
        let before = Diagram { dom: cur.dom.clone(), cod: cur.cod.clone(), slices: s.before.clone() };
        if normalize(sig, &before) != cur {
            return Err(TraceError::WrongClass(n));
        }
        let (from, to) = rules.sides(i, s.forward);
        if !rules.matches_at(&s.before, &before.levels(sig), from, s.at, s.offset) {
            return Err(TraceError::NoMatch(n));
        }
        let after = Rules::rewrite(&s.before, s.at, s.offset, from, to);
        if after != s.after {
            return Err(TraceError::WrongResult(n));
        }
        cur = normalize(sig, &Diagram { dom: cur.dom.clone(), cod: cur.cod.clone(), slices: after });
    }
    if cur != normalize(sig, &trace.end) {
        return Err(TraceError::WrongEnd);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montheory::parse_term;
    use crate::montheory::theories::builtin_theory;

    #[test]
    fn associativity_four_ways() {
        let th = builtin_theory("monoids", &[]).unwrap();
        let p = |s: &str| parse_term(&th.sig, s).unwrap();
        let trees = [
            "m * id[• •] ; m * id[•] ; m",
            "id[•] * m * id[•] ; m * id[•] ; m",
            "m * m ; m",
            "id[•] * m * id[•] ; id[•] * m ; m",
            "id[• •] * m ; id[•] * m ; m",
        ];
        let cfg = ProverConfig::default();
        for x in &trees {
            for y in &trees {
                let v = prove_equal(&th, &p(x), &p(y), &cfg).unwrap();
                let Verdict::Proved(t) = v else { panic!("{x} = {y}: {v:?}") };
                check_trace(&th, &t).unwrap();
            }
        }
    }

    #[test]
    fn tampered_traces_fail() {
        let th = builtin_theory("monoids", &[]).unwrap();
        let p = |s: &str| parse_term(&th.sig, s).unwrap();
        let v = prove_equal(&th, &p("m * id[•] ; m"), &p("id[•] * m ; m"), &ProverConfig::default()).unwrap();
        let Verdict::Proved(mut t) = v else { panic!() };
        assert!(!t.steps.is_empty());
        t.steps[0].offset += 1;
        assert!(check_trace(&th, &t).is_err());
    }

    #[test]
    fn free_theory_refutes() {
        let th = builtin_theory("monoids", &[]).unwrap();
        let free = MonTheory::new(th.sig.clone());
        let p = |s: &str| parse_term(&th.sig, s).unwrap();
        let v = prove_equal(&free, &p("m * id[•] ; m"), &p("id[•] * m ; m"), &ProverConfig::default()).unwrap();
        assert_eq!(v, Verdict::Refuted);
    }

    #[test]
    fn unit_laws_need_insertion() {
        let th = builtin_theory("monoids", &[]).unwrap();
        let p = |s: &str| parse_term(&th.sig, s).unwrap();
        let v = prove_equal(&th, &p("id[•]"), &p("u * id[•] ; m"), &ProverConfig::default()).unwrap();
        let Verdict::Proved(t) = v else { panic!("{v:?}") };
        check_trace(&th, &t).unwrap();
        let v = prove_equal(&th, &p("u * u ; m"), &p("u"), &ProverConfig::default()).unwrap();
        assert!(v.is_proved());
    }

    #[test]
    fn budget_is_respected() {
        let th = crate::montheory::mth::parse_mth("COLOURS •\nUSE monoids\nGENERATORS\n  t : • -> •\n").unwrap();
        let p = |s: &str| parse_term(&th.sig, s).unwrap();
        let small = ProverConfig { budget: 5, max_extra_slices: 2 };
        let v = prove_equal(&th, &p("id[•]"), &p("t"), &small).unwrap();
        assert!(matches!(v, Verdict::Unknown { explored: 5, exhausted: false }), "{v:?}");
        let large = ProverConfig { budget: 1_000_000, max_extra_slices: 2 };
        let v = prove_equal(&th, &p("id[•]"), &p("t"), &large).unwrap();
        assert!(matches!(v, Verdict::Unknown { exhausted: true, .. }), "{v:?}");
    }
}
