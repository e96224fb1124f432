/*!
Line-oriented `.fc` (finite category) and `.fun` (finite functor) files.

```text
# CAT_2
OBJECTS 0 1
MORPHISMS u: 0 -> 1
```

A `.fc` body has `OBJECTS` lines, `MORPHISMS` lines (or a `MORPHISMS`
header followed by `f: a -> b` lines) and `COMPOSE f;g = h` lines, in the
same two styles. Identities `id_a` are implicit, as are composites with
identities. `#` starts a comment.

A `.fun` file has a `SOURCE` section, a `TARGET` section (both `.fc`
bodies) and a `MAP` section of `a -> x` and `f -> g` lines. Unmapped
identities go to identities.
*/

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{validate_category, validate_functor, CategoryBuilder, FinCategory, FinFunctor};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Objects,
    Morphisms,
    Compose,
}

/// One `.fc` body, collected with the line numbers of every reference.
#[derive(Default)]
struct FcBody {
    objects: Vec<(usize, String)>,
    morphisms: Vec<(usize, String, String, String)>,
    composites: Vec<(usize, String, String, String)>,
}

impl FcBody {
    fn line(&mut self, sec: &mut Section, n: usize, text: &str) -> Result<(), ParseError> {
        let (head, rest) = match text.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (text, ""),
        };
        let body = match head {
            "OBJECTS" => {
                *sec = Section::Objects;
                rest
            }
            "MORPHISMS" => {
                *sec = Section::Morphisms;
                rest
            }
            "COMPOSE" => {
                *sec = Section::Compose;
                rest
            }
            _ => text,
        };
        if body.is_empty() {
            return Ok(());
        }
        match sec {
            Section::None => Err(err(n, format!("unexpected `{text}` outside a section"))),
            Section::Objects => {
                for o in body.split_whitespace() {
                    self.objects.push((n, o.to_string()));
                }
                Ok(())
            }
            Section::Morphisms => {
                let (name, sig) = body.split_once(':').ok_or_else(|| err(n, "expected `f: a -> b`"))?;
                let (d, c) = sig.split_once("->").ok_or_else(|| err(n, "expected `f: a -> b`"))?;
                let (name, d, c) = (name.trim(), d.trim(), c.trim());
                if name.is_empty() || d.is_empty() || c.is_empty() {
                    return Err(err(n, "expected `f: a -> b`"));
                }
                self.morphisms.push((n, name.into(), d.into(), c.into()));
                Ok(())
            }
            Section::Compose => {
                let (lhs, h) = body.split_once('=').ok_or_else(|| err(n, "expected `f;g = h`"))?;
                let (f, g) = lhs.split_once(';').ok_or_else(|| err(n, "expected `f;g = h`"))?;
                self.composites.push((n, f.trim().into(), g.trim().into(), h.trim().into()));
                Ok(())
            }
        }
    }

    fn build(&self, end_line: usize) -> Result<FinCategory, ParseError> {
        let mut b = CategoryBuilder::new();
        let mut objs = std::collections::BTreeSet::new();
        for (n, o) in &self.objects {
            if !objs.insert(o.as_str()) {
                return Err(err(*n, format!("duplicate object `{o}`")));
            }
            b.object(o.clone());
        }
        let mut mors: std::collections::BTreeMap<String, (String, String)> = objs
            .iter()
            .map(|o| (format!("id_{o}"), (o.to_string(), o.to_string())))
            .collect();
        for (n, f, d, c) in &self.morphisms {
            for o in [d, c] {
                if !objs.contains(o.as_str()) {
                    return Err(err(*n, format!("unknown object `{o}`")));
                }
            }
            if mors.insert(f.clone(), (d.clone(), c.clone())).is_some() {
                return Err(err(*n, format!("duplicate morphism `{f}`")));
            }
            b.morphism(f.clone(), d.clone(), c.clone());
        }
        for (n, f, g, h) in &self.composites {
            for m in [f, g, h] {
                if !mors.contains_key(m) {
                    return Err(err(*n, format!("unknown morphism `{m}`")));
                }
            }
            if mors[f].1 != mors[g].0 {
                return Err(err(*n, format!("`{f};{g}` is not composable")));
            }
            if mors[h] != (mors[f].0.clone(), mors[g].1.clone()) {
                return Err(err(*n, format!("`{h}` does not have the type of `{f};{g}`")));
            }
            b.composite(f.clone(), g.clone(), h.clone());
        }
        let c = b.build().map_err(|e| err(end_line, e.to_string()))?;
        if let Some(v) = validate_category(&c).first() {
            return Err(err(end_line, format!("not a category: {v}")));
        }
        Ok(c)
    }
}

fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

pub fn parse_fc(src: &str) -> Result<FinCategory, ParseError> {
    let mut body = FcBody::default();
    let mut sec = Section::None;
    let mut last = 0;
    for (i, raw) in src.lines().enumerate() {
        last = i + 1;
        let t = content(raw);
        if !t.is_empty() {
            body.line(&mut sec, i + 1, t)?;
        }
    }
    body.build(last)
}

pub fn parse_fun(src: &str) -> Result<FinFunctor, ParseError> {
    #[derive(PartialEq)]
    enum Part {
        Start,
        Source,
        Target,
        Map,
    }
    let mut part = Part::Start;
    let (mut s, mut t) = (FcBody::default(), FcBody::default());
    let mut sec = Section::None;
    let mut maps = Vec::new();
    let mut last = 0;
    let mut source_end = 0;
    for (i, raw) in src.lines().enumerate() {
        let n = i + 1;
        last = n;
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        match line {
            "SOURCE" => {
                part = Part::Source;
                sec = Section::None;
                continue;
            }
            "TARGET" => {
                source_end = n;
                part = Part::Target;
                sec = Section::None;
                continue;
            }
            "MAP" => {
                part = Part::Map;
                continue;
            }
            _ => {}
        }
        match part {
            Part::Start => return Err(err(n, "expected `SOURCE`")),
            Part::Source => s.line(&mut sec, n, line)?,
            Part::Target => t.line(&mut sec, n, line)?,
            Part::Map => {
                let (a, b) = line.split_once("->").ok_or_else(|| err(n, "expected `x -> y`"))?;
                maps.push((n, a.trim().to_string(), b.trim().to_string()));
            }
        }
    }
    let source = Arc::new(s.build(source_end)?);
    let target = Arc::new(t.build(last)?);
    let mut omap = vec![None; source.num_objects()];
    let mut mmap = vec![None; source.num_morphisms()];
    for (n, a, b) in &maps {
        if let Some(o) = source.obj(a) {
            let x = target.obj(b).ok_or_else(|| err(*n, format!("unknown target object `{b}`")))?;
            omap[o] = Some(x);
        } else if let Some(m) = source.mor(a) {
            let g = target.mor(b).ok_or_else(|| err(*n, format!("unknown target morphism `{b}`")))?;
            mmap[m] = Some(g);
        } else {
            return Err(err(*n, format!("unknown source id `{a}`")));
        }
    }
    let omap: Vec<_> = omap
        .into_iter()
        .enumerate()
        .map(|(o, x)| x.ok_or_else(|| err(last, format!("object `{}` is not mapped", source.obj_name(o)))))
        .collect::<Result<_, _>>()?;
    let mmap = mmap
        .into_iter()
        .enumerate()
        .map(|(m, g)| match g {
            Some(g) => Ok(g),
            None if source.is_identity(m) => Ok(target.id(omap[source.dom(m)])),
            None => Err(err(last, format!("morphism `{}` is not mapped", source.mor_name(m)))),
        })
        .collect::<Result<_, _>>()?;
    let f = FinFunctor::new(source, target, omap, mmap);
    if let Some(v) = validate_functor(&f).first() {
        return Err(err(last, format!("not a functor: {v}")));
    }
    Ok(f)
}

/// `.fc` text listing every non-identity composite not involving an identity.
pub fn write_fc(c: &FinCategory) -> String {
    let mut out = String::new();
    let objs: Vec<&str> = c.objects().map(|o| c.obj_name(o)).collect();
    let _ = writeln!(out, "OBJECTS {}", objs.join(" "));
    let non_id: Vec<_> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    if !non_id.is_empty() {
        out.push_str("MORPHISMS\n");
        for &m in &non_id {
            let _ = writeln!(out, "  {}: {} -> {}", c.mor_name(m), c.obj_name(c.dom(m)), c.obj_name(c.cod(m)));
        }
    }
    let mut comps = Vec::new();
    for &f in &non_id {
        for &g in &non_id {
            if let Some(h) = c.compose(f, g) {
                comps.push(format!("  {};{} = {}", c.mor_name(f), c.mor_name(g), c.mor_name(h)));
            }
        }
    }
    if !comps.is_empty() {
        out.push_str("COMPOSE\n");
        for l in comps {
            out.push_str(&l);
            out.push('\n');
        }
    }
    out
}

pub fn write_fun(f: &FinFunctor) -> String {
    let mut out = String::from("SOURCE\n");
    out.push_str(&write_fc(&f.source));
    out.push_str("TARGET\n");
    out.push_str(&write_fc(&f.target));
    out.push_str("MAP\n");
    for o in f.source.objects() {
        let _ = writeln!(out, "  {} -> {}", f.source.obj_name(o), f.target.obj_name(f.ob(o)));
    }
    for m in f.source.morphisms().filter(|&m| !f.source.is_identity(m)) {
        let _ = writeln!(out, "  {} -> {}", f.source.mor_name(m), f.target.mor_name(f.mor(m)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::fixtures::{p_h, pi1};
    use crate::fincat::fixtures::*;

    #[test]
    fn round_trips() {
        for c in [cat_1(), cat_2(), cat_par(), cat_01(), cat_x3(), cat_z2()] {
            let back = parse_fc(&write_fc(&c)).unwrap();
            assert_eq!(write_fc(&back), write_fc(&c));
            assert_eq!(back.num_morphisms(), c.num_morphisms());
        }
        for f in [pi1(), p_h()] {
            let back = parse_fun(&write_fun(&f)).unwrap();
            assert_eq!(back.omap, f.omap);
            assert_eq!(back.mmap.len(), f.mmap.len());
        }
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_fc("OBJECTS a b\nMORPHISMS\n  f: a -> c\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_fc("OBJECTS a b\nMORPHISMS f: a -> b\nCOMPOSE f;q = f\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("unknown morphism"));
        let e = parse_fc("f: a -> b\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_fc("OBJECTS x\nMORPHISMS s: x -> x\n").unwrap_err();
        assert!(e.message.contains("not a category"));
    }

    #[test]
    fn inline_style() {
        let c = parse_fc("OBJECTS x y z # three\nMORPHISMS f: x -> y\nMORPHISMS g: y -> z\nMORPHISMS h: x -> z\nCOMPOSE f;g = h\n")
            .unwrap();
        assert_eq!(c.comp(c.mor("f").unwrap(), c.mor("g").unwrap()), c.mor("h").unwrap());
    }
}
