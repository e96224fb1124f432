/*!
Bounded equality of 2-cell expressions in strict (monoidal) 2-categories.

Expressions are trees over generators, identities, vertical `;`,
horizontal `*` and (optionally) tensor `⊗`. They are kept flattened:
chains of one operation, identity units dropped, adjacent identities merged.
A search step is either a ground axiom matched on a contiguous window of
a chain, or one of the interchange laws. Proofs are step lists that
[`check_trace`] replays.
*/

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

/// The 1-cell side of a 2-cell calculus.
pub trait OneCells {
    type One: Clone + Eq + Ord + Hash + Debug + Serialize;
    type Gen: Clone + Eq + Ord + Hash + Debug + Serialize;

    fn gen_boundary(&self, g: &Self::Gen) -> (Self::One, Self::One);
    /// Horizontal composite in diagrammatic order, if composable.
    fn compose(&self, a: &Self::One, b: &Self::One) -> Option<Self::One>;
    /// An identity 1-cell, which is a unit for `*`.
    fn is_identity_one(&self, a: &Self::One) -> bool;
    fn tensor(&self, _a: &Self::One, _b: &Self::One) -> Option<Self::One> {
        None
    }
    /// The unit 1-cell for `⊗`.
    fn is_tensor_unit(&self, _a: &Self::One) -> bool {
        false
    }
    /// Equality of 1-cells, when representatives are not canonical.
    fn same(&self, a: &Self::One, b: &Self::One) -> bool {
        a == b
    }
    /// Rendering used in error messages.
    fn show_one(&self, a: &Self::One) -> String {
        format!("{a:?}")
    }
}

fn same_boundary<S: OneCells>(sys: &S, a: &Boundary<S::One>, b: &Boundary<S::One>) -> bool {
    sys.same(&a.0, &b.0) && sys.same(&a.1, &b.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Op {
    Vert,
    Horiz,
    Tensor,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Expr<O, G> {
    Gen(G),
    Id(O),
    /// At least two factors, none of the same operation.
    Chain(Op, Vec<Expr<O, G>>),
}

impl<O: Clone, G: Clone> Expr<O, G> {
    pub fn vert(a: Self, b: Self) -> Self {
        Expr::Chain(Op::Vert, vec![a, b])
    }
    pub fn horiz(a: Self, b: Self) -> Self {
        Expr::Chain(Op::Horiz, vec![a, b])
    }
    pub fn tensor(a: Self, b: Self) -> Self {
        Expr::Chain(Op::Tensor, vec![a, b])
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Gen(_) | Expr::Id(_) => 1,
            Expr::Chain(_, xs) => xs.len() - 1 + xs.iter().map(Expr::size).sum::<usize>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum BoundaryError {
    #[error("vertical composite with codomain {0} and domain {1}")]
    Vertical(String, String),
    #[error("horizontal composite of {0} and {1} is undefined")]
    Horizontal(String, String),
    #[error("tensor of {0} and {1} is undefined")]
    Tensor(String, String),
}

pub type Boundary<O> = (O, O);

pub fn boundary<S: OneCells>(sys: &S, e: &Expr<S::One, S::Gen>) -> Result<Boundary<S::One>, BoundaryError> {
    match e {
        Expr::Gen(g) => Ok(sys.gen_boundary(g)),
        Expr::Id(o) => Ok((o.clone(), o.clone())),
        Expr::Chain(op, xs) => {
            let mut cur = boundary(sys, &xs[0])?;
            for x in &xs[1..] {
                let b = boundary(sys, x)?;
                cur = match op {
                    Op::Vert => {
                        if !sys.same(&cur.1, &b.0) {
                            return Err(BoundaryError::Vertical(sys.show_one(&cur.1), sys.show_one(&b.0)));
                        }
                        (cur.0, b.1)
                    }
                    Op::Horiz => {
                        let err = || BoundaryError::Horizontal(sys.show_one(&cur.0), sys.show_one(&b.0));
                        (sys.compose(&cur.0, &b.0).ok_or_else(err)?, sys.compose(&cur.1, &b.1).ok_or_else(err)?)
                    }
                    Op::Tensor => {
                        let err = || BoundaryError::Tensor(sys.show_one(&cur.0), sys.show_one(&b.0));
                        (sys.tensor(&cur.0, &b.0).ok_or_else(err)?, sys.tensor(&cur.1, &b.1).ok_or_else(err)?)
                    }
                };
            }
            Ok(cur)
        }
    }
}

/// Flattens chains, drops unit identities and merges adjacent identities.
/// Assumes `e` is well-boundaried.
pub fn normalize<S: OneCells>(sys: &S, e: &Expr<S::One, S::Gen>) -> Expr<S::One, S::Gen> {
    match e {
        Expr::Gen(_) | Expr::Id(_) => e.clone(),
        Expr::Chain(op, xs) => {
            let mut flat: Vec<Expr<S::One, S::Gen>> = Vec::new();
            for x in xs {
                match normalize(sys, x) {
                    Expr::Chain(o2, ys) if o2 == *op => flat.extend(ys),
                    y => flat.push(y),
                }
            }
            let whole = boundary(sys, e).ok();
            let mut out: Vec<Expr<S::One, S::Gen>> = Vec::new();
            for x in flat {
                match (*op, &x) {
                    (Op::Vert, Expr::Id(_)) => continue,
                    (Op::Horiz, Expr::Id(o)) if sys.is_identity_one(o) => continue,
                    (Op::Tensor, Expr::Id(o)) if sys.is_tensor_unit(o) => continue,
                    _ => {}
                }
                if let (Some(Expr::Id(a)), Expr::Id(b)) = (out.last(), &x) {
                    let merged = match op {
                        Op::Horiz => sys.compose(a, b),
                        Op::Tensor => sys.tensor(a, b),
                        Op::Vert => None,
                    };
                    if let Some(m) = merged {
                        *out.last_mut().expect("non-empty") = Expr::Id(m);
                        continue;
                    }
                }
                out.push(x);
            }
            match out.len() {
                0 => Expr::Id(whole.map(|b| b.0).expect("identity chain has a boundary")),
                1 => out.pop().expect("one factor"),
                _ => Expr::Chain(*op, out),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axiom<O, G> {
    pub name: String,
    pub lhs: Expr<O, G>,
    pub rhs: Expr<O, G>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step<O, G> {
    pub rule: String,
    /// Child indices from the root to the rewritten subterm.
    pub path: Vec<usize>,
    pub result: Expr<O, G>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace<O, G> {
    pub start: Expr<O, G>,
    pub end: Expr<O, G>,
    pub steps: Vec<Step<O, G>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict2<O, G> {
    Proved(Trace<O, G>),
    Unknown { explored: usize, exhausted: bool },
}

impl<O, G> Verdict2<O, G> {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict2::Proved(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config2 {
    pub budget: usize,
    /// Largest expression size visited.
    pub max_size: usize,
}

impl Default for Config2 {
    fn default() -> Self {
        Config2 { budget: 5_000, max_size: 12 }
    }
}

type E<S> = Expr<<S as OneCells>::One, <S as OneCells>::Gen>;

/// Rewrites at the root of `e`, by rule name. Results are normalised and
/// boundary-checked.
fn root_rewrites<S: OneCells>(sys: &S, axioms: &[Axiom<S::One, S::Gen>], e: &E<S>) -> Vec<(String, E<S>)> {
    let mut out = Vec::new();
    let target = match boundary(sys, e) {
        Ok(b) => b,
        Err(_) => return out,
    };
    let mut push = |name: &str, cand: E<S>| {
        if boundary(sys, &cand).is_ok_and(|b| same_boundary(sys, &b, &target)) {
            out.push((name.to_string(), normalize(sys, &cand)));
        }
    };
    for ax in axioms {
        for (from, to, dir) in [(&ax.lhs, &ax.rhs, ""), (&ax.rhs, &ax.lhs, "~")] {
            let name = format!("{dir}{}", ax.name);
            if e == from {
                push(&name, to.clone());
            }
            if let (Expr::Chain(op, xs), Expr::Chain(op2, ys)) = (e, from) {
                if op == op2 && ys.len() < xs.len() {
                    for i in 0..=xs.len() - ys.len() {
                        if xs[i..i + ys.len()] == ys[..] {
                            let mut v = xs[..i].to_vec();
                            v.push(to.clone());
                            v.extend_from_slice(&xs[i + ys.len()..]);
                            push(&name, Expr::Chain(*op, v));
                        }
                    }
                }
            } else if let Expr::Chain(op, xs) = e {
                for i in 0..xs.len() {
                    if &xs[i] == from {
                        let mut v = xs.clone();
                        v[i] = to.clone();
                        push(&name, Expr::Chain(*op, v));
                    }
                }
            }
        }
    }
    if let Expr::Chain(op, xs) = e {
        // whiskered interchange: x*y as (x*id);(id*y) or (id*y);(x*id)
        if matches!(op, Op::Horiz | Op::Tensor) {
            for i in 0..xs.len() - 1 {
                let (Ok(bx), Ok(by)) = (boundary(sys, &xs[i]), boundary(sys, &xs[i + 1])) else { continue };
                for first_left in [true, false] {
                    let (a, b) = if first_left {
                        (
                            Expr::Chain(*op, vec![xs[i].clone(), Expr::Id(by.0.clone())]),
                            Expr::Chain(*op, vec![Expr::Id(bx.1.clone()), xs[i + 1].clone()]),
                        )
                    } else {
                        (
                            Expr::Chain(*op, vec![Expr::Id(bx.0.clone()), xs[i + 1].clone()]),
                            Expr::Chain(*op, vec![xs[i].clone(), Expr::Id(by.1.clone())]),
                        )
                    };
                    let mut v = xs[..i].to_vec();
                    v.push(Expr::vert(a, b));
                    v.extend_from_slice(&xs[i + 2..]);
                    push("interchange-split", Expr::Chain(*op, v));
                }
            }
        }
        // (a1*..*an);(b1*..*bn) -> (a1;b1)*..*(an;bn), for * and ⊗
        if *op == Op::Vert {
            for i in 0..xs.len() - 1 {
                for inner in [Op::Horiz, Op::Tensor] {
                    let as_chain = |x: &E<S>| match x {
                        Expr::Chain(o, ys) if *o == inner => ys.clone(),
                        other => vec![other.clone()],
                    };
                    let (l, r) = (as_chain(&xs[i]), as_chain(&xs[i + 1]));
                    for (l, r) in pad_pairs(sys, inner, &l, &r) {
                        let cols: Vec<E<S>> = l.into_iter().zip(r).map(|(a, b)| Expr::vert(a, b)).collect();
                        let mut v = xs[..i].to_vec();
                        v.push(Expr::Chain(inner, cols));
                        v.extend_from_slice(&xs[i + 2..]);
                        push("interchange-merge", Expr::Chain(Op::Vert, v));
                    }
                }
            }
        }
        // a Horiz/Tensor chain whose factors are vertical: split the columns
        if matches!(op, Op::Horiz | Op::Tensor) {
            let cols: Vec<Vec<E<S>>> = xs
                .iter()
                .map(|x| match x {
                    Expr::Chain(Op::Vert, ys) => ys.clone(),
                    other => vec![other.clone()],
                })
                .collect();
            if cols.iter().any(|c| c.len() > 1) {
                let mut top = Vec::new();
                let mut bottom = Vec::new();
                let mut ok = true;
                for c in &cols {
                    let Ok(b) = boundary(sys, &c[0]) else {
                        ok = false;
                        break;
                    };
                    if c.len() == 1 {
                        top.push(c[0].clone());
                        bottom.push(Expr::Id(b.1));
                    } else {
                        top.push(c[0].clone());
                        let rest = if c.len() == 2 { c[1].clone() } else { Expr::Chain(Op::Vert, c[1..].to_vec()) };
                        bottom.push(rest);
                    }
                }
                if ok {
                    push("interchange-unmerge", Expr::vert(Expr::Chain(*op, top), Expr::Chain(*op, bottom)));
                }
            }
        }
    }
    out
}

/// Equal-length factor lists for the two rows, identity-padded when the
/// boundaries require it. Only exact alignments are returned.
fn pad_pairs<S: OneCells>(sys: &S, _op: Op, l: &[E<S>], r: &[E<S>]) -> Vec<(Vec<E<S>>, Vec<E<S>>)> {
    if l.len() != r.len() || l.len() < 2 {
        return Vec::new();
    }
    let ok = l.iter().zip(r).all(|(a, b)| match (boundary(sys, a), boundary(sys, b)) {
        (Ok(x), Ok(y)) => sys.same(&x.1, &y.0),
        _ => false,
    });
    if ok {
        vec![(l.to_vec(), r.to_vec())]
    } else {
        Vec::new()
    }
}

fn subterm<'a, O, G>(e: &'a Expr<O, G>, path: &[usize]) -> Option<&'a Expr<O, G>> {
    match path.split_first() {
        None => Some(e),
        Some((&i, rest)) => match e {
            Expr::Chain(_, xs) => subterm(xs.get(i)?, rest),
            _ => None,
        },
    }
}

fn replace<S: OneCells>(sys: &S, e: &E<S>, path: &[usize], new: E<S>) -> E<S> {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => match e {
            Expr::Chain(op, xs) => {
                let mut v = xs.clone();
                v[i] = replace(sys, &xs[i], rest, new);
                normalize(sys, &Expr::Chain(*op, v))
            }
            _ => unreachable!("path into a leaf"),
        },
    }
}

fn positions<O, G>(e: &Expr<O, G>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    if let Expr::Chain(_, xs) = e {
        for (i, x) in xs.iter().enumerate() {
            prefix.push(i);
            positions(x, prefix, out);
            prefix.pop();
        }
    }
}

/// All one-step rewrites, with the step that produced each.
pub fn neighbours<S: OneCells>(sys: &S, axioms: &[Axiom<S::One, S::Gen>], e: &E<S>) -> Vec<(E<S>, Step<S::One, S::Gen>)> {
    let mut ps = Vec::new();
    positions(e, &mut Vec::new(), &mut ps);
    let mut out = Vec::new();
    for p in ps {
        let sub = subterm(e, &p).expect("position exists");
        for (rule, r) in root_rewrites(sys, axioms, sub) {
            let whole = replace(sys, e, &p, r.clone());
            out.push((whole, Step { rule, path: p.clone(), result: r }));
        }
    }
    out
}

type Parents<S> = HashMap<E<S>, Option<(E<S>, Step<<S as OneCells>::One, <S as OneCells>::Gen>)>>;

fn path_to<S: OneCells>(par: &Parents<S>, end: &E<S>) -> Vec<(E<S>, Step<S::One, S::Gen>, E<S>)> {
    let mut out = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, step))) = par.get(&cur) {
        out.push((prev.clone(), step.clone(), cur.clone()));
        cur = prev.clone();
    }
    out.reverse();
    out
}

/// Finds the step that rewrites `from` into `to`, for reversing a path.
fn step_between<S: OneCells>(sys: &S, axioms: &[Axiom<S::One, S::Gen>], from: &E<S>, to: &E<S>) -> Option<Step<S::One, S::Gen>> {
    neighbours(sys, axioms, from).into_iter().find(|(e, _)| e == to).map(|(_, s)| s)
}

/// Bidirectional search. Fails early when the boundaries differ.
pub fn prove<S: OneCells>(
    sys: &S,
    axioms: &[Axiom<S::One, S::Gen>],
    a: &E<S>,
    b: &E<S>,
    cfg: &Config2,
) -> Result<Verdict2<S::One, S::Gen>, BoundaryError> {
    let (ba, bb) = (boundary(sys, a)?, boundary(sys, b)?);
    if !same_boundary(sys, &ba, &bb) {
        return Err(BoundaryError::Vertical(format!("{ba:?}"), format!("{bb:?}")));
    }
    let (a, b) = (normalize(sys, a), normalize(sys, b));
    if a == b {
        return Ok(Verdict2::Proved(Trace { start: a, end: b, steps: Vec::new() }));
    }
    let mut par: [Parents<S>; 2] = [HashMap::new(), HashMap::new()];
    let mut queue: [VecDeque<E<S>>; 2] = [VecDeque::new(), VecDeque::new()];
    par[0].insert(a.clone(), None);
    par[1].insert(b.clone(), None);
    queue[0].push_back(a.clone());
    queue[1].push_back(b.clone());
    let mut explored = 0;
    while !queue[0].is_empty() || !queue[1].is_empty() {
        if explored >= cfg.budget {
            return Ok(Verdict2::Unknown { explored, exhausted: false });
        }
        let side = if queue[1].is_empty() || (!queue[0].is_empty() && queue[0].len() <= queue[1].len()) { 0 } else { 1 };
        let state = queue[side].pop_front().expect("non-empty");
        explored += 1;
        for (next, step) in neighbours(sys, axioms, &state) {
            if next.size() > cfg.max_size || par[side].contains_key(&next) {
                continue;
            }
            par[side].insert(next.clone(), Some((state.clone(), step)));
            if par[1 - side].contains_key(&next) {
                let mut steps: Vec<Step<S::One, S::Gen>> = path_to::<S>(&par[0], &next).into_iter().map(|x| x.1).collect();
                for (prev, _, cur) in path_to::<S>(&par[1], &next).into_iter().rev() {
                    // the backward tree stores prev -> cur; replay needs cur -> prev
                    match step_between(sys, axioms, &cur, &prev) {
                        Some(s) => steps.push(s),
                        None => return Ok(Verdict2::Unknown { explored, exhausted: false }),
                    }
                }
                return Ok(Verdict2::Proved(Trace { start: a, end: b, steps }));
            }
            queue[side].push_back(next);
        }
    }
    Ok(Verdict2::Unknown { explored, exhausted: true })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Trace2Error {
    #[error("step {0} is not a rewrite of the current expression")]
    BadStep(usize),
    #[error("trace ends elsewhere")]
    WrongEnd,
}

pub fn check_trace<S: OneCells>(
    sys: &S,
    axioms: &[Axiom<S::One, S::Gen>],
    t: &Trace<S::One, S::Gen>,
) -> Result<(), Trace2Error> {
    let mut cur = normalize(sys, &t.start);
    for (n, s) in t.steps.iter().enumerate() {
        let sub = subterm(&cur, &s.path).ok_or(Trace2Error::BadStep(n))?;
        let ok = root_rewrites(sys, axioms, sub).into_iter().any(|(r, e)| r == s.rule && e == s.result);
        if !ok {
            return Err(Trace2Error::BadStep(n));
        }
        cur = replace(sys, &cur, &s.path, s.result.clone());
    }
    if cur != normalize(sys, &t.end) {
        return Err(Trace2Error::WrongEnd);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Free 2-category on one object: 1-cells are words over letters.
    struct Words;

    impl OneCells for Words {
        type One = Vec<char>;
        type Gen = (char, Vec<char>, Vec<char>);
        fn gen_boundary(&self, g: &Self::Gen) -> (Vec<char>, Vec<char>) {
            (g.1.clone(), g.2.clone())
        }
        fn compose(&self, a: &Vec<char>, b: &Vec<char>) -> Option<Vec<char>> {
            Some([a.as_slice(), b].concat())
        }
        fn is_identity_one(&self, a: &Vec<char>) -> bool {
            a.is_empty()
        }
    }

    fn g(n: char, d: &str, c: &str) -> Expr<Vec<char>, (char, Vec<char>, Vec<char>)> {
        Expr::Gen((n, d.chars().collect(), c.chars().collect()))
    }

    #[test]
    fn interchange_and_units() {
        let (a, b) = (g('a', "x", "y"), g('b', "u", "v"));
        let idx = Expr::Id(vec!['x']);
        let lhs = Expr::vert(Expr::horiz(a.clone(), Expr::Id(vec!['u'])), Expr::horiz(Expr::Id(vec!['y']), b.clone()));
        let rhs = Expr::horiz(a.clone(), b.clone());
        let v = prove(&Words, &[], &lhs, &rhs, &Config2::default()).unwrap();
        let Verdict2::Proved(t) = v else { panic!("{v:?}") };
        check_trace(&Words, &[], &t).unwrap();
        assert_eq!(normalize(&Words, &Expr::vert(idx, a.clone())), a);
        assert!(prove(&Words, &[], &a, &b, &Config2::default()).is_err());
    }

    #[test]
    fn axioms_in_context() {
        let a = g('a', "x", "y");
        let c = g('c', "x", "y");
        let w = g('w', "z", "z");
        let ax = [Axiom { name: "ac".into(), lhs: a.clone(), rhs: c.clone() }];
        let l = Expr::horiz(w.clone(), a);
        let r = Expr::horiz(w, c);
        let v = prove(&Words, &ax, &l, &r, &Config2::default()).unwrap();
        let Verdict2::Proved(t) = v else { panic!() };
        assert_eq!(t.steps.len(), 1);
        check_trace(&Words, &ax, &t).unwrap();
        let v = prove(&Words, &[], &l, &r, &Config2 { budget: 200, max_size: 9 }).unwrap();
        assert!(!v.is_proved());
    }
}
