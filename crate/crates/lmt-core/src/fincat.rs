/*!
Finite categories, functors and natural transformations stored as explicit
tables, together with detection of cartesian and strict monoidal structure.

Objects and morphisms are addressed by dense indices ([`Ob`], [`Mor`]); every
index carries an opaque string name. Composition is written in diagrammatic
order: `compose(f, g)` is `f;g` and requires `cod(f) = dom(g)`.
*/

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub type Ob = usize;
pub type Mor = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    dom: Vec<Ob>,
    cod: Vec<Ob>,
    ident: Vec<Mor>,
    table: Vec<Option<Mor>>,
    hom: Vec<Vec<Mor>>,
    obj_ix: BTreeMap<String, Ob>,
    mor_ix: BTreeMap<String, Mor>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism `{0}`")]
    DuplicateMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("`{f};{g}` is not composable")]
    NotComposable { f: String, g: String },
}

/// Incremental construction of a [`FinCategory`] by name.
///
/// Identities `id_a` are added for every object unless a morphism of that name
/// is declared explicitly; composites with identities are filled in by
/// [`CategoryBuilder::build`] unless given.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    identities: BTreeMap<String, String>,
    composites: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> &mut Self {
        self.objects.push(name.into());
        self
    }

    pub fn morphism(
        &mut self,
        name: impl Into<String>,
        dom: impl Into<String>,
        cod: impl Into<String>,
    ) -> &mut Self {
        self.morphisms.push((name.into(), dom.into(), cod.into()));
        self
    }

    /// Use `name` (already declared as an endomorphism) as the identity of `object`.
    pub fn identity(&mut self, object: impl Into<String>, name: impl Into<String>) -> &mut Self {
        self.identities.insert(object.into(), name.into());
        self
    }

    pub fn composite(
        &mut self,
        f: impl Into<String>,
        g: impl Into<String>,
        h: impl Into<String>,
    ) -> &mut Self {
        self.composites.push((f.into(), g.into(), h.into()));
        self
    }

    pub fn build(&self) -> Result<FinCategory, BuildError> {
        let mut obj_ix = BTreeMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if obj_ix.insert(o.clone(), i).is_some() {
                return Err(BuildError::DuplicateObject(o.clone()));
            }
        }
        let mut mor_names = Vec::new();
        let mut dom = Vec::new();
        let mut cod = Vec::new();
        let mut mor_ix = BTreeMap::new();
        let mut ident = vec![usize::MAX; self.objects.len()];
        for (i, o) in self.objects.iter().enumerate() {
            if self.identities.contains_key(o) {
                continue;
            }
            let name = format!("id_{o}");
            if self.morphisms.iter().any(|m| m.0 == name) {
                continue;
            }
            mor_ix.insert(name.clone(), mor_names.len());
            ident[i] = mor_names.len();
            mor_names.push(name);
            dom.push(i);
            cod.push(i);
        }
        for (name, d, c) in &self.morphisms {
            let d = *obj_ix.get(d).ok_or_else(|| BuildError::UnknownObject(d.clone()))?;
            let c = *obj_ix.get(c).ok_or_else(|| BuildError::UnknownObject(c.clone()))?;
            if mor_ix.insert(name.clone(), mor_names.len()).is_some() {
                return Err(BuildError::DuplicateMorphism(name.clone()));
            }
            mor_names.push(name.clone());
            dom.push(d);
            cod.push(c);
        }
        for (i, o) in self.objects.iter().enumerate() {
            let name = self.identities.get(o).cloned().unwrap_or_else(|| format!("id_{o}"));
            if ident[i] == usize::MAX {
                ident[i] = *mor_ix
                    .get(&name)
                    .ok_or_else(|| BuildError::UnknownMorphism(name.clone()))?;
            }
        }
        let m = mor_names.len();
        let mut table = vec![None; m * m];
        for (f, g, h) in &self.composites {
            let look = |s: &String| {
                mor_ix.get(s).copied().ok_or_else(|| BuildError::UnknownMorphism(s.clone()))
            };
            let (fi, gi, hi) = (look(f)?, look(g)?, look(h)?);
            if cod[fi] != dom[gi] {
                return Err(BuildError::NotComposable { f: f.clone(), g: g.clone() });
            }
            table[fi * m + gi] = Some(hi);
        }
        for f in 0..m {
            let l = ident[dom[f]];
            let r = ident[cod[f]];
            if table[l * m + f].is_none() {
                table[l * m + f] = Some(f);
            }
            if table[f * m + r].is_none() {
                table[f * m + r] = Some(f);
            }
        }
        Ok(FinCategory::assemble(self.objects.clone(), mor_names, dom, cod, ident, table))
    }
}

impl FinCategory {
    /// Raw constructor from index data; no axioms are checked.
    pub fn from_parts(
        obj_names: Vec<String>,
        mor_names: Vec<String>,
        dom: Vec<Ob>,
        cod: Vec<Ob>,
        ident: Vec<Mor>,
        compose: impl Fn(Mor, Mor) -> Option<Mor>,
    ) -> Self {
        let m = mor_names.len();
        let mut table = vec![None; m * m];
        for f in 0..m {
            for g in 0..m {
                if cod[f] == dom[g] {
                    table[f * m + g] = compose(f, g);
                }
            }
        }
        Self::assemble(obj_names, mor_names, dom, cod, ident, table)
    }

    fn assemble(
        obj_names: Vec<String>,
        mor_names: Vec<String>,
        dom: Vec<Ob>,
        cod: Vec<Ob>,
        ident: Vec<Mor>,
        table: Vec<Option<Mor>>,
    ) -> Self {
        let n = obj_names.len();
        let mut hom = vec![Vec::new(); n * n];
        for f in 0..mor_names.len() {
            hom[dom[f] * n + cod[f]].push(f);
        }
        let obj_ix = obj_names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mor_ix = mor_names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        FinCategory { obj_names, mor_names, dom, cod, ident, table, hom, obj_ix, mor_ix }
    }

    /// Build from string slices; identities are implicit as `id_a`.
    pub fn from_spec(
        objects: &[&str],
        morphisms: &[(&str, &str, &str)],
        composites: &[(&str, &str, &str)],
    ) -> Result<Self, BuildError> {
        let mut b = CategoryBuilder::new();
        for o in objects {
            b.object(*o);
        }
        for (n, d, c) in morphisms {
            b.morphism(*n, *d, *c);
        }
        for (f, g, h) in composites {
            b.composite(*f, *g, *h);
        }
        b.build()
    }

    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }

    pub fn objects(&self) -> std::ops::Range<Ob> {
        0..self.obj_names.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.mor_names.len()
    }

    pub fn obj_name(&self, x: Ob) -> &str {
        &self.obj_names[x]
    }

    pub fn mor_name(&self, f: Mor) -> &str {
        &self.mor_names[f]
    }

    pub fn obj(&self, name: &str) -> Option<Ob> {
        self.obj_ix.get(name).copied()
    }

    pub fn mor(&self, name: &str) -> Option<Mor> {
        self.mor_ix.get(name).copied()
    }

    pub fn dom(&self, f: Mor) -> Ob {
        self.dom[f]
    }

    pub fn cod(&self, f: Mor) -> Ob {
        self.cod[f]
    }

    pub fn id(&self, x: Ob) -> Mor {
        self.ident[x]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.ident[self.dom[f]] == f
    }

    /// `f;g` when the table defines it.
    pub fn compose(&self, f: Mor, g: Mor) -> Option<Mor> {
        self.table[f * self.mor_names.len() + g]
    }

    /// `f;g`, panicking when undefined. Use on validated categories only.
    pub fn comp(&self, f: Mor, g: Mor) -> Mor {
        self.compose(f, g).unwrap_or_else(|| {
            panic!("composite {};{} undefined", self.mor_names[f], self.mor_names[g])
        })
    }

    /// Composite of a nonempty path.
    pub fn comp_path(&self, path: &[Mor]) -> Mor {
        path[1..].iter().fold(path[0], |acc, &g| self.comp(acc, g))
    }

    pub fn hom(&self, a: Ob, b: Ob) -> &[Mor] {
        &self.hom[a * self.obj_names.len() + b]
    }

    /// Overwrite one composition table entry (used to build corrupted tables in tests).
    pub fn with_composite(mut self, f: Mor, g: Mor, h: Option<Mor>) -> Self {
        let m = self.mor_names.len();
        self.table[f * m + g] = h;
        self
    }

    /// Morphisms sorted by name; the deterministic order used for choices.
    pub fn by_name<'a>(&self, ms: impl IntoIterator<Item = &'a Mor>) -> Vec<Mor> {
        let mut v: Vec<Mor> = ms.into_iter().copied().collect();
        v.sort_by(|a, b| self.mor_names[*a].cmp(&self.mor_names[*b]));
        v
    }

    pub fn is_thin(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    /// The category with one object `*` and its identity.
    pub fn terminal() -> Self {
        Self::from_spec(&["*"], &[], &[]).expect("static")
    }

    /// Same data with every object and morphism renamed.
    pub fn renamed(&self, obj: impl Fn(Ob) -> String, mor: impl Fn(Mor) -> String) -> Self {
        let on = self.objects().map(obj).collect();
        let mn = self.morphisms().map(mor).collect();
        Self::assemble(
            on,
            mn,
            self.dom.clone(),
            self.cod.clone(),
            self.ident.clone(),
            self.table.clone(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CategoryViolation {
    IdentityTyping { object: String },
    MissingComposite { f: String, g: String },
    CompositeTyping { f: String, g: String, h: String },
    LeftUnit { f: String },
    RightUnit { f: String },
    Associativity { f: String, g: String, h: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IdentityTyping { object } => write!(out, "identity of {object} is not an endomorphism of it"),
            Self::MissingComposite { f, g } => write!(out, "composite {f};{g} missing"),
            Self::CompositeTyping { f, g, h } => write!(out, "{f};{g} = {h} has the wrong type"),
            Self::LeftUnit { f } => write!(out, "left unit law fails at {f}"),
            Self::RightUnit { f } => write!(out, "right unit law fails at {f}"),
            Self::Associativity { f, g, h } => write!(out, "associativity fails at ({f},{g},{h})"),
        }
    }
}

/// Every violated axiom; empty iff `c` is a category.
pub fn validate_category(c: &FinCategory) -> Vec<CategoryViolation> {
    let mut out = Vec::new();
    let n = |f: Mor| c.mor_name(f).to_string();
    for x in c.objects() {
        let i = c.id(x);
        if c.dom(i) != x || c.cod(i) != x {
            out.push(CategoryViolation::IdentityTyping { object: c.obj_name(x).into() });
        }
    }
    let mut typed = true;
    for f in c.morphisms() {
        for g in c.morphisms() {
            if c.cod(f) != c.dom(g) {
                continue;
            }
            match c.compose(f, g) {
                None => {
                    typed = false;
                    out.push(CategoryViolation::MissingComposite { f: n(f), g: n(g) })
                }
                Some(h) if c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g) => {
                    typed = false;
                    out.push(CategoryViolation::CompositeTyping { f: n(f), g: n(g), h: n(h) })
                }
                _ => {}
            }
        }
    }
    for f in c.morphisms() {
        if c.compose(c.id(c.dom(f)), f) != Some(f) {
            out.push(CategoryViolation::LeftUnit { f: n(f) });
        }
        if c.compose(f, c.id(c.cod(f))) != Some(f) {
            out.push(CategoryViolation::RightUnit { f: n(f) });
        }
    }
    if typed {
        for f in c.morphisms() {
            for g in c.hom_from(c.cod(f)) {
                let fg = c.comp(f, g);
                for h in c.hom_from(c.cod(g)) {
                    if c.compose(fg, h) != c.compose(f, c.comp(g, h)) {
                        out.push(CategoryViolation::Associativity { f: n(f), g: n(g), h: n(h) });
                    }
                }
            }
        }
    }
    out
}

impl FinCategory {
    /// All morphisms with domain `a`.
    pub fn hom_from(&self, a: Ob) -> impl Iterator<Item = Mor> + '_ {
        self.objects().flat_map(move |b| self.hom(a, b).iter().copied())
    }

    /// All morphisms with codomain `b`.
    pub fn hom_to(&self, b: Ob) -> impl Iterator<Item = Mor> + '_ {
        self.objects().flat_map(move |a| self.hom(a, b).iter().copied())
    }

    /// Composable pairs `(f, g)` with `f;g = h`.
    pub fn factorisations(&self, h: Mor) -> Vec<(Mor, Mor)> {
        let mut out = Vec::new();
        for f in self.hom_from(self.dom(h)) {
            for &g in self.hom(self.cod(f), self.cod(h)) {
                if self.compose(f, g) == Some(h) {
                    out.push((f, g));
                }
            }
        }
        out
    }
}

/// Componentwise product category; objects `(x,y)`, morphisms `(f,g)`.
pub fn product_category(a: &FinCategory, b: &FinCategory) -> FinCategory {
    let (na, nb) = (a.num_objects(), b.num_objects());
    let mb = b.num_morphisms();
    let mut on = Vec::with_capacity(na * nb);
    for x in a.objects() {
        for y in b.objects() {
            on.push(format!("({},{})", a.obj_name(x), b.obj_name(y)));
        }
    }
    let mut mn = Vec::new();
    let mut dom = Vec::new();
    let mut cod = Vec::new();
    for f in a.morphisms() {
        for g in b.morphisms() {
            mn.push(format!("({},{})", a.mor_name(f), b.mor_name(g)));
            dom.push(a.dom(f) * nb + b.dom(g));
            cod.push(a.cod(f) * nb + b.cod(g));
        }
    }
    let ident = (0..na * nb).map(|i| a.id(i / nb) * mb + b.id(i % nb)).collect();
    FinCategory::from_parts(on, mn, dom, cod, ident, |p, q| {
        let f = a.compose(p / mb, q / mb)?;
        let g = b.compose(p % mb, q % mb)?;
        Some(f * mb + g)
    })
}

/// Projections out of `product_category(a, b)`.
pub fn product_projections(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    prod: &Arc<FinCategory>,
) -> (FinFunctor, FinFunctor) {
    let nb = b.num_objects();
    let mb = b.num_morphisms();
    let p1 = FinFunctor::new(
        prod.clone(),
        a.clone(),
        prod.objects().map(|i| i / nb).collect(),
        prod.morphisms().map(|m| m / mb).collect(),
    );
    let p2 = FinFunctor::new(
        prod.clone(),
        b.clone(),
        prod.objects().map(|i| i % nb).collect(),
        prod.morphisms().map(|m| m % mb).collect(),
    );
    (p1, p2)
}

/// Same objects and morphisms with dom/cod swapped and composition reversed.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let m = c.num_morphisms();
    let mut table = vec![None; m * m];
    for f in 0..m {
        for g in 0..m {
            table[f * m + g] = c.table[g * m + f];
        }
    }
    FinCategory::assemble(
        c.obj_names.clone(),
        c.mor_names.clone(),
        c.cod.clone(),
        c.dom.clone(),
        c.ident.clone(),
        table,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub omap: Vec<Ob>,
    pub mmap: Vec<Mor>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("no image given for `{0}`")]
    Missing(String),
    #[error(transparent)]
    Build(#[from] BuildError),
}

impl FinFunctor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        omap: Vec<Ob>,
        mmap: Vec<Mor>,
    ) -> Self {
        FinFunctor { source, target, omap, mmap }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let omap = c.objects().collect();
        let mmap = c.morphisms().collect();
        FinFunctor { source: c.clone(), target: c, omap, mmap }
    }

    /// Build from name pairs. Identities default to the identity of the image object.
    pub fn from_names(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: &[(&str, &str)],
        morphisms: &[(&str, &str)],
    ) -> Result<Self, FunctorError> {
        let mut omap = vec![usize::MAX; source.num_objects()];
        for (a, b) in objects {
            let a = source.obj(a).ok_or_else(|| BuildError::UnknownObject(a.to_string()))?;
            let b = target.obj(b).ok_or_else(|| BuildError::UnknownObject(b.to_string()))?;
            omap[a] = b;
        }
        if let Some(x) = omap.iter().position(|&o| o == usize::MAX) {
            return Err(FunctorError::Missing(source.obj_name(x).into()));
        }
        let mut mmap = vec![usize::MAX; source.num_morphisms()];
        for (f, g) in morphisms {
            let f = source.mor(f).ok_or_else(|| BuildError::UnknownMorphism(f.to_string()))?;
            let g = target.mor(g).ok_or_else(|| BuildError::UnknownMorphism(g.to_string()))?;
            mmap[f] = g;
        }
        for x in source.objects() {
            let i = source.id(x);
            if mmap[i] == usize::MAX {
                mmap[i] = target.id(omap[x]);
            }
        }
        if let Some(f) = mmap.iter().position(|&m| m == usize::MAX) {
            return Err(FunctorError::Missing(source.mor_name(f).into()));
        }
        Ok(FinFunctor { source, target, omap, mmap })
    }

    /// The unique functor into the terminal category.
    pub fn to_terminal(source: Arc<FinCategory>, target: Arc<FinCategory>) -> Self {
        FinFunctor {
            omap: vec![0; source.num_objects()],
            mmap: vec![target.id(0); source.num_morphisms()],
            source,
            target,
        }
    }

    pub fn ob(&self, x: Ob) -> Ob {
        self.omap[x]
    }

    pub fn mor(&self, f: Mor) -> Mor {
        self.mmap[f]
    }

    /// Diagrammatic composite `self;other`.
    pub fn then(&self, other: &FinFunctor) -> FinFunctor {
        FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            omap: self.omap.iter().map(|&x| other.omap[x]).collect(),
            mmap: self.mmap.iter().map(|&f| other.mmap[f]).collect(),
        }
    }

    /// Bijective on objects and morphisms (and a functor).
    pub fn is_isomorphism(&self) -> bool {
        if !validate_functor(self).is_empty() {
            return false;
        }
        let bij = |v: &[usize], n: usize| {
            let mut seen = vec![false; n];
            v.len() == n && v.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        };
        bij(&self.omap, self.target.num_objects()) && bij(&self.mmap, self.target.num_morphisms())
    }

    pub fn opposite(&self) -> FinFunctor {
        FinFunctor {
            source: Arc::new(opposite(&self.source)),
            target: Arc::new(opposite(&self.target)),
            omap: self.omap.clone(),
            mmap: self.mmap.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum FunctorViolation {
    Range { item: String },
    Typing { f: String },
    Identity { object: String },
    Composition { f: String, g: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Range { item } => write!(out, "image of {item} out of range"),
            Self::Typing { f } => write!(out, "image of {f} has the wrong domain or codomain"),
            Self::Identity { object } => write!(out, "identity of {object} not preserved"),
            Self::Composition { f, g } => write!(out, "composite {f};{g} not preserved"),
        }
    }
}

/// Every violated functor axiom; empty iff `func` is a functor.
pub fn validate_functor(func: &FinFunctor) -> Vec<FunctorViolation> {
    let (s, t) = (&*func.source, &*func.target);
    let mut out = Vec::new();
    if func.omap.len() != s.num_objects() || func.mmap.len() != s.num_morphisms() {
        out.push(FunctorViolation::Range { item: "tables".into() });
        return out;
    }
    for x in s.objects() {
        if func.omap[x] >= t.num_objects() {
            out.push(FunctorViolation::Range { item: s.obj_name(x).into() });
        }
    }
    for f in s.morphisms() {
        if func.mmap[f] >= t.num_morphisms() {
            out.push(FunctorViolation::Range { item: s.mor_name(f).into() });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in s.morphisms() {
        let g = func.mmap[f];
        if t.dom(g) != func.omap[s.dom(f)] || t.cod(g) != func.omap[s.cod(f)] {
            out.push(FunctorViolation::Typing { f: s.mor_name(f).into() });
        }
    }
    for x in s.objects() {
        if func.mmap[s.id(x)] != t.id(func.omap[x]) {
            out.push(FunctorViolation::Identity { object: s.obj_name(x).into() });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in s.morphisms() {
        for g in s.hom_from(s.cod(f)) {
            if let Some(h) = s.compose(f, g) {
                if t.compose(func.mmap[f], func.mmap[g]) != Some(func.mmap[h]) {
                    out.push(FunctorViolation::Composition {
                        f: s.mor_name(f).into(),
                        g: s.mor_name(g).into(),
                    });
                }
            }
        }
    }
    out
}

/// All functors `a -> b`, in a deterministic order, stopping after `limit`.
pub fn all_functors(a: &Arc<FinCategory>, b: &Arc<FinCategory>, limit: usize) -> Vec<FinFunctor> {
    let mut out = Vec::new();
    let mut omap = vec![0; a.num_objects()];
    functor_objects(a, b, 0, &mut omap, &mut out, limit);
    out
}

fn functor_objects(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    i: usize,
    omap: &mut Vec<Ob>,
    out: &mut Vec<FinFunctor>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if i == a.num_objects() {
        let mut mmap = vec![usize::MAX; a.num_morphisms()];
        for x in a.objects() {
            mmap[a.id(x)] = b.id(omap[x]);
        }
        let order: Vec<Mor> = a.morphisms().filter(|&f| !a.is_identity(f)).collect();
        functor_morphisms(a, b, &order, 0, omap, &mut mmap, out, limit);
        return;
    }
    for y in b.objects() {
        omap[i] = y;
        functor_objects(a, b, i + 1, omap, out, limit);
    }
}

#[allow(clippy::too_many_arguments)]
fn functor_morphisms(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    order: &[Mor],
    k: usize,
    omap: &[Ob],
    mmap: &mut Vec<Mor>,
    out: &mut Vec<FinFunctor>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if k == order.len() {
        out.push(FinFunctor::new(a.clone(), b.clone(), omap.to_vec(), mmap.clone()));
        return;
    }
    let f = order[k];
    for &g in b.hom(omap[a.dom(f)], omap[a.cod(f)]) {
        mmap[f] = g;
        if composition_consistent(a, b, mmap, f) {
            functor_morphisms(a, b, order, k + 1, omap, mmap, out, limit);
        }
    }
    mmap[f] = usize::MAX;
}

fn composition_consistent(a: &FinCategory, b: &FinCategory, mmap: &[Mor], f: Mor) -> bool {
    let set = |m: Mor| mmap[m] != usize::MAX;
    for p in a.morphisms() {
        for q in a.hom_from(a.cod(p)) {
            let h = a.comp(p, q);
            if p != f && q != f && h != f {
                continue;
            }
            if set(p) && set(q) && set(h) && b.compose(mmap[p], mmap[q]) != Some(mmap[h]) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransf {
    pub from: FinFunctor,
    pub to: FinFunctor,
    pub components: Vec<Mor>,
}

/// Every naturality square commutes (and components are typed).
pub fn is_natural(t: &NatTransf) -> bool {
    let s = &*t.from.source;
    let c = &*t.from.target;
    for x in s.objects() {
        let a = t.components[x];
        if c.dom(a) != t.from.ob(x) || c.cod(a) != t.to.ob(x) {
            return false;
        }
    }
    s.morphisms().all(|f| {
        let l = c.compose(t.from.mor(f), t.components[s.cod(f)]);
        let r = c.compose(t.components[s.dom(f)], t.to.mor(f));
        l.is_some() && l == r
    })
}

/// Strict monoidal structure on a finite category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictMonStructure {
    pub carrier: Arc<FinCategory>,
    pub tensor_ob: Vec<Ob>,
    pub tensor_mor: Vec<Mor>,
    pub unit: Ob,
}

impl StrictMonStructure {
    pub fn ob(&self, x: Ob, y: Ob) -> Ob {
        self.tensor_ob[x * self.carrier.num_objects() + y]
    }

    pub fn mor(&self, f: Mor, g: Mor) -> Mor {
        self.tensor_mor[f * self.carrier.num_morphisms() + g]
    }

    /// Monoidal structure on a one-object category whose morphisms form a
    /// commutative monoid: tensor is composition.
    pub fn from_commutative_monoid(c: Arc<FinCategory>) -> Self {
        let m = c.num_morphisms();
        let mut tensor_mor = vec![0; m * m];
        for f in 0..m {
            for g in 0..m {
                tensor_mor[f * m + g] = c.comp(f, g);
            }
        }
        StrictMonStructure { carrier: c, tensor_ob: vec![0], tensor_mor, unit: 0 }
    }
}

/// Violations of the strict monoidal axioms; empty iff valid.
pub fn validate_monoidal(s: &StrictMonStructure) -> Vec<String> {
    let c = &*s.carrier;
    let mut out = Vec::new();
    for x in c.objects() {
        if s.ob(s.unit, x) != x || s.ob(x, s.unit) != x {
            out.push(format!("unit law on object {}", c.obj_name(x)));
        }
        for y in c.objects() {
            for z in c.objects() {
                if s.ob(s.ob(x, y), z) != s.ob(x, s.ob(y, z)) {
                    out.push(format!(
                        "associativity on objects {},{},{}",
                        c.obj_name(x),
                        c.obj_name(y),
                        c.obj_name(z)
                    ));
                }
            }
        }
    }
    let iu = c.id(s.unit);
    for f in c.morphisms() {
        if s.mor(iu, f) != f || s.mor(f, iu) != f {
            out.push(format!("unit law on morphism {}", c.mor_name(f)));
        }
        for g in c.morphisms() {
            let t = s.mor(f, g);
            if c.dom(t) != s.ob(c.dom(f), c.dom(g)) || c.cod(t) != s.ob(c.cod(f), c.cod(g)) {
                out.push(format!("typing of {}*{}", c.mor_name(f), c.mor_name(g)));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for x in c.objects() {
        for y in c.objects() {
            if s.mor(c.id(x), c.id(y)) != c.id(s.ob(x, y)) {
                out.push(format!("id*id at {},{}", c.obj_name(x), c.obj_name(y)));
            }
        }
    }
    for f in c.morphisms() {
        for g in c.morphisms() {
            for h in c.morphisms() {
                if s.mor(s.mor(f, g), h) != s.mor(f, s.mor(g, h)) {
                    out.push(format!(
                        "associativity on morphisms {},{},{}",
                        c.mor_name(f),
                        c.mor_name(g),
                        c.mor_name(h)
                    ));
                }
            }
        }
    }
    for f in c.morphisms() {
        for g in c.hom_from(c.cod(f)) {
            for h in c.morphisms() {
                for k in c.hom_from(c.cod(h)) {
                    let l = s.mor(c.comp(f, g), c.comp(h, k));
                    let r = c.comp(s.mor(f, h), s.mor(g, k));
                    if l != r {
                        out.push(format!(
                            "interchange at ({},{}),({},{})",
                            c.mor_name(f),
                            c.mor_name(g),
                            c.mor_name(h),
                            c.mor_name(k)
                        ));
                    }
                }
            }
        }
    }
    out
}

/// A strict monoidal structure with a strict symmetry `sigma[x][y]: x*y -> y*x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMonStructure {
    pub mon: StrictMonStructure,
    pub sigma: Vec<Mor>,
}

impl SymMonStructure {
    pub fn sigma(&self, x: Ob, y: Ob) -> Mor {
        self.sigma[x * self.mon.carrier.num_objects() + y]
    }
}

/// Violations of the symmetric strict monoidal axioms; empty iff valid.
pub fn validate_symmetric(s: &SymMonStructure) -> Vec<String> {
    let mut out = validate_monoidal(&s.mon);
    if !out.is_empty() {
        return out;
    }
    let m = &s.mon;
    let c = &*m.carrier;
    for x in c.objects() {
        for y in c.objects() {
            let sg = s.sigma(x, y);
            if c.dom(sg) != m.ob(x, y) || c.cod(sg) != m.ob(y, x) {
                out.push(format!("typing of symmetry at {},{}", c.obj_name(x), c.obj_name(y)));
                continue;
            }
            if c.comp(sg, s.sigma(y, x)) != c.id(m.ob(x, y)) {
                out.push(format!("symmetry not involutive at {},{}", c.obj_name(x), c.obj_name(y)));
            }
            for z in c.objects() {
                let l = s.sigma(x, m.ob(y, z));
                let r = c.comp(m.mor(s.sigma(x, y), c.id(z)), m.mor(c.id(y), s.sigma(x, z)));
                if l != r {
                    out.push(format!("hexagon at {},{},{}", c.obj_name(x), c.obj_name(y), c.obj_name(z)));
                }
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in c.morphisms() {
        for g in c.morphisms() {
            let l = c.comp(m.mor(f, g), s.sigma(c.cod(f), c.cod(g)));
            let r = c.comp(s.sigma(c.dom(f), c.dom(g)), m.mor(g, f));
            if l != r {
                out.push(format!("symmetry not natural at {},{}", c.mor_name(f), c.mor_name(g)));
            }
        }
    }
    out
}

/// All symmetric strict monoidal structures on `c`, up to `limit` of them.
///
/// Tensor on morphisms is determined by the whiskerings `f*id_y` and `id_x*g`,
/// so the search assigns those and checks the remaining laws at the end.
pub fn enumerate_symmetric_monoidal(c: &Arc<FinCategory>, limit: usize) -> Vec<SymMonStructure> {
    let n = c.num_objects();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for unit in c.objects() {
        let free: Vec<(Ob, Ob)> = c
            .objects()
            .flat_map(|x| c.objects().map(move |y| (x, y)))
            .filter(|&(x, y)| x != unit && y != unit)
            .collect();
        let mut tob = vec![usize::MAX; n * n];
        for x in c.objects() {
            tob[unit * n + x] = x;
            tob[x * n + unit] = x;
        }
        let mut tables = Vec::new();
        object_tensors(n, &free, 0, &mut tob, &mut tables);
        for tob in tables {
            if out.len() >= limit {
                return out;
            }
            morphism_tensors(c, unit, &tob, limit, &mut out);
        }
    }
    out
}

fn object_tensors(n: usize, free: &[(Ob, Ob)], k: usize, tob: &mut Vec<Ob>, out: &mut Vec<Vec<Ob>>) {
    if k == free.len() {
        let ok = (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| tob[tob[x * n + y] * n + z] == tob[x * n + tob[y * n + z]]))
        });
        if ok {
            out.push(tob.clone());
        }
        return;
    }
    let (x, y) = free[k];
    for v in 0..n {
        tob[x * n + y] = v;
        object_tensors(n, free, k + 1, tob, out);
    }
}

fn morphism_tensors(
    c: &Arc<FinCategory>,
    unit: Ob,
    tob: &[Ob],
    limit: usize,
    out: &mut Vec<SymMonStructure>,
) {
    let n = c.num_objects();
    let m = c.num_morphisms();
    // slots: left whiskers (f, y) meaning f*id_y and right whiskers (x, g) meaning id_x*g
    let mut slots: Vec<(bool, Mor, Ob)> = Vec::new();
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        for y in c.objects().filter(|&y| y != unit) {
            slots.push((true, f, y));
            slots.push((false, f, y));
        }
    }
    let mut left = vec![usize::MAX; m * n];
    let mut right = vec![usize::MAX; n * m];
    for f in c.morphisms() {
        left[f * n + unit] = f;
        right[unit * m + f] = f;
        for y in c.objects() {
            if c.is_identity(f) {
                left[f * n + y] = c.id(tob[c.dom(f) * n + y]);
                right[y * m + f] = c.id(tob[y * n + c.dom(f)]);
            }
        }
    }
    let mut found = Vec::new();
    whisker_search(c, tob, &slots, 0, &mut left, &mut right, &mut found, limit);
    for (left, right) in found {
        let mut tmor = vec![0; m * m];
        let mut ok = true;
        for f in c.morphisms() {
            for g in c.morphisms() {
                let a = left[f * n + c.dom(g)];
                let b = right[c.cod(f) * m + g];
                match c.compose(a, b) {
                    Some(h) => tmor[f * m + g] = h,
                    None => ok = false,
                }
            }
        }
        if !ok {
            continue;
        }
        let mon = StrictMonStructure { carrier: c.clone(), tensor_ob: tob.to_vec(), tensor_mor: tmor, unit };
        if !validate_monoidal(&mon).is_empty() {
            continue;
        }
        symmetries(&mon, limit, out);
        if out.len() >= limit {
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn whisker_search(
    c: &FinCategory,
    tob: &[Ob],
    slots: &[(bool, Mor, Ob)],
    k: usize,
    left: &mut Vec<Mor>,
    right: &mut Vec<Mor>,
    found: &mut Vec<(Vec<Mor>, Vec<Mor>)>,
    limit: usize,
) {
    if found.len() >= limit {
        return;
    }
    let n = c.num_objects();
    let m = c.num_morphisms();
    if k == slots.len() {
        found.push((left.clone(), right.clone()));
        return;
    }
    let (is_left, f, y) = slots[k];
    let (d, e) = if is_left {
        (tob[c.dom(f) * n + y], tob[c.cod(f) * n + y])
    } else {
        (tob[y * n + c.dom(f)], tob[y * n + c.cod(f)])
    };
    for &h in c.hom(d, e) {
        if is_left {
            left[f * n + y] = h;
        } else {
            right[y * m + f] = h;
        }
        if whiskers_functorial(c, left, right, f, y, is_left) {
            whisker_search(c, tob, slots, k + 1, left, right, found, limit);
        }
    }
    if is_left {
        left[f * n + y] = usize::MAX;
    } else {
        right[y * m + f] = usize::MAX;
    }
}

fn whiskers_functorial(c: &FinCategory, left: &[Mor], right: &[Mor], f: Mor, y: Ob, is_left: bool) -> bool {
    let n = c.num_objects();
    let m = c.num_morphisms();
    let get = |p: Mor| if is_left { left[p * n + y] } else { right[y * m + p] };
    for g in c.morphisms() {
        let pairs = [(f, g), (g, f)];
        for (p, q) in pairs {
            if c.cod(p) != c.dom(q) {
                continue;
            }
            let h = c.comp(p, q);
            let (a, b, r) = (get(p), get(q), get(h));
            if a == usize::MAX || b == usize::MAX || r == usize::MAX {
                continue;
            }
            if c.compose(a, b) != Some(r) {
                return false;
            }
        }
    }
    true
}

fn symmetries(mon: &StrictMonStructure, limit: usize, out: &mut Vec<SymMonStructure>) {
    let c = &*mon.carrier;
    let n = c.num_objects();
    let pairs: Vec<(Ob, Ob)> = c.objects().flat_map(|x| c.objects().map(move |y| (x, y))).collect();
    let mut sigma = vec![usize::MAX; n * n];
    fn go(
        mon: &StrictMonStructure,
        pairs: &[(Ob, Ob)],
        k: usize,
        sigma: &mut Vec<Mor>,
        out: &mut Vec<SymMonStructure>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let c = &*mon.carrier;
        let n = c.num_objects();
        if k == pairs.len() {
            let s = SymMonStructure { mon: mon.clone(), sigma: sigma.clone() };
            if validate_symmetric(&s).is_empty() {
                out.push(s);
            }
            return;
        }
        let (x, y) = pairs[k];
        let cands: Vec<Mor> = if x == mon.unit || y == mon.unit {
            vec![c.id(mon.ob(x, y))]
        } else {
            c.hom(mon.ob(x, y), mon.ob(y, x)).to_vec()
        };
        for s in cands {
            sigma[x * n + y] = s;
            let back = sigma[y * n + x];
            if back != usize::MAX && c.compose(s, back) != Some(c.id(mon.ob(x, y))) {
                continue;
            }
            go(mon, pairs, k + 1, sigma, out, limit);
        }
        sigma[x * n + y] = usize::MAX;
    }
    go(mon, &pairs, 0, &mut sigma, out, limit);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCone {
    pub object: Ob,
    pub p1: Mor,
    pub p2: Mor,
}

/// Chosen terminal object and binary products with verified universal properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartesianStructure {
    pub carrier: Arc<FinCategory>,
    pub terminal: Ob,
    pub bang: Vec<Mor>,
    pub products: Vec<ProductCone>,
}

impl CartesianStructure {
    pub fn product(&self, a: Ob, b: Ob) -> &ProductCone {
        &self.products[a * self.carrier.num_objects() + b]
    }

    /// The unique `h: x -> a×b` with `h;p1 = f` and `h;p2 = g`.
    pub fn pairing(&self, f: Mor, g: Mor) -> Option<Mor> {
        let c = &*self.carrier;
        if c.dom(f) != c.dom(g) {
            return None;
        }
        let cone = self.product(c.cod(f), c.cod(g));
        let mut hits = c
            .hom(c.dom(f), cone.object)
            .iter()
            .copied()
            .filter(|&h| c.comp(h, cone.p1) == f && c.comp(h, cone.p2) == g);
        let h = hits.next()?;
        hits.next().is_none().then_some(h)
    }

    /// Product of morphisms `f×g` via pairing.
    pub fn times(&self, f: Mor, g: Mor) -> Option<Mor> {
        let c = &*self.carrier;
        let src = self.product(c.dom(f), c.dom(g));
        self.pairing(c.comp(src.p1, f), c.comp(src.p2, g))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartesianAbsence {
    pub no_terminal: bool,
    pub pairs_without_product: Vec<(String, String)>,
}

pub fn is_product_cone(c: &FinCategory, a: Ob, b: Ob, cone: &ProductCone) -> bool {
    c.objects().all(|x| {
        c.hom(x, a).iter().all(|&f| {
            c.hom(x, b).iter().all(|&g| {
                c.hom(x, cone.object)
                    .iter()
                    .filter(|&&h| c.comp(h, cone.p1) == f && c.comp(h, cone.p2) == g)
                    .count()
                    == 1
            })
        })
    })
}

pub fn is_terminal(c: &FinCategory, t: Ob) -> bool {
    c.objects().all(|x| c.hom(x, t).len() == 1)
}

/// Terminal object and binary products, chosen lexicographically by name.
pub fn find_cartesian_structure(c: &Arc<FinCategory>) -> Result<CartesianStructure, CartesianAbsence> {
    let mut objs: Vec<Ob> = c.objects().collect();
    objs.sort_by(|a, b| c.obj_name(*a).cmp(c.obj_name(*b)));
    let mut products = Vec::new();
    let mut missing = Vec::new();
    for a in c.objects() {
        for b in c.objects() {
            let mut found = None;
            'search: for &p in &objs {
                for p1 in c.by_name(c.hom(p, a)) {
                    for p2 in c.by_name(c.hom(p, b)) {
                        let cone = ProductCone { object: p, p1, p2 };
                        if is_product_cone(c, a, b, &cone) {
                            found = Some(cone);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(cone) => products.push(cone),
                None => {
                    missing.push((c.obj_name(a).to_string(), c.obj_name(b).to_string()));
                    products.push(ProductCone { object: 0, p1: 0, p2: 0 });
                }
            }
        }
    }
    let terminal = objs.iter().copied().find(|&t| is_terminal(c, t));
    match terminal {
        Some(t) if missing.is_empty() => Ok(CartesianStructure {
            carrier: c.clone(),
            terminal: t,
            bang: c.objects().map(|x| c.hom(x, t)[0]).collect(),
            products,
        }),
        _ => Err(CartesianAbsence { no_terminal: terminal.is_none(), pairs_without_product: missing }),
    }
}

/// Independent re-check of a claimed cartesian structure.
pub fn verify_cartesian(cs: &CartesianStructure) -> bool {
    let c = &*cs.carrier;
    if !is_terminal(c, cs.terminal) {
        return false;
    }
    if c.objects().any(|x| c.hom(x, cs.terminal) != [cs.bang[x]]) {
        return false;
    }
    c.objects().all(|a| {
        c.objects().all(|b| {
            let cone = cs.product(a, b);
            c.dom(cone.p1) == cone.object
                && c.dom(cone.p2) == cone.object
                && c.cod(cone.p1) == a
                && c.cod(cone.p2) == b
                && is_product_cone(c, a, b, cone)
        })
    })
}

/// Standard fixtures used throughout the tests and documentation.
pub mod fixtures {
    use super::*;

    /// One object, one identity.
    pub fn cat_1() -> FinCategory {
        FinCategory::terminal()
    }

    /// `u: 0 -> 1`.
    pub fn cat_2() -> FinCategory {
        FinCategory::from_spec(&["0", "1"], &[("u", "0", "1")], &[]).expect("static")
    }

    /// Parallel pair `u, v: 0 -> 1`.
    pub fn cat_par() -> FinCategory {
        FinCategory::from_spec(&["0", "1"], &[("u", "0", "1"), ("v", "0", "1")], &[]).expect("static")
    }

    /// `!: ∅ -> 1`.
    pub fn cat_01() -> FinCategory {
        FinCategory::from_spec(&["∅", "1"], &[("!", "∅", "1")], &[]).expect("static")
    }

    /// `f: x -> y`, `g: y -> z`, `h = f;g`.
    pub fn cat_x3() -> FinCategory {
        FinCategory::from_spec(
            &["x", "y", "z"],
            &[("f", "x", "y"), ("g", "y", "z"), ("h", "x", "z")],
            &[("f", "g", "h")],
        )
        .expect("static")
    }

    /// One object whose endomorphisms form the group Z/2.
    pub fn cat_z2() -> FinCategory {
        let mut b = CategoryBuilder::new();
        b.object("*").morphism("s", "*", "*").composite("s", "s", "id_*");
        b.build().expect("static")
    }

    /// Product monoidal structure on `cat_01` (∅ is absorbing, 1 is the unit).
    pub fn cat_01_product_structure() -> SymMonStructure {
        let c = Arc::new(cat_01());
        let e = c.obj("∅").unwrap();
        let one = c.obj("1").unwrap();
        let n = 2;
        let mut tob = vec![0; 4];
        for x in 0..n {
            for y in 0..n {
                tob[x * n + y] = if x == one && y == one { one } else { e };
            }
        }
        let s = enumerate_symmetric_monoidal(&c, 64)
            .into_iter()
            .find(|s| s.mon.unit == one && s.mon.tensor_ob == tob)
            .expect("product structure exists");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fixtures_are_categories() {
        for c in [cat_1(), cat_2(), cat_par(), cat_01(), cat_x3(), cat_z2()] {
            assert!(validate_category(&c).is_empty(), "{:?}", validate_category(&c));
        }
    }

    #[test]
    fn corrupted_unit_is_reported() {
        let c = cat_2();
        let u = c.mor("u").unwrap();
        let id1 = c.id(c.obj("1").unwrap());
        let id0 = c.id(c.obj("0").unwrap());
        let bad = c.with_composite(u, id1, Some(id0));
        let v = validate_category(&bad);
        assert!(v.iter().any(|x| matches!(x, CategoryViolation::RightUnit { .. })
            || matches!(x, CategoryViolation::CompositeTyping { .. })));
        assert!(!v.is_empty());
    }

    #[test]
    fn functor_checks() {
        let c2 = Arc::new(cat_2());
        let c1 = Arc::new(cat_1());
        assert!(validate_functor(&FinFunctor::identity(c2.clone())).is_empty());
        assert!(validate_functor(&FinFunctor::to_terminal(c2.clone(), c1)).is_empty());
        let swap = FinFunctor::new(c2.clone(), c2.clone(), vec![1, 0], c2.morphisms().map(|f| {
            if c2.is_identity(f) { c2.id(1 - c2.dom(f)) } else { f }
        }).collect());
        assert!(validate_functor(&swap).iter().any(|v| matches!(v, FunctorViolation::Typing { .. })));
    }

    #[test]
    fn product_counts() {
        let p = product_category(&cat_2(), &cat_2());
        assert_eq!((p.num_objects(), p.num_morphisms()), (4, 9));
        assert!(validate_category(&p).is_empty());
        let q = product_category(&cat_1(), &cat_2());
        assert_eq!((q.num_objects(), q.num_morphisms()), (2, 3));
        let r = product_category(&cat_1(), &cat_1());
        assert_eq!((r.num_objects(), r.num_morphisms()), (1, 1));
        let (a, b) = (Arc::new(cat_2()), Arc::new(cat_par()));
        let prod = Arc::new(product_category(&a, &b));
        let (p1, p2) = product_projections(&a, &b, &prod);
        assert!(validate_functor(&p1).is_empty() && validate_functor(&p2).is_empty());
    }

    #[test]
    fn opposite_is_involutive() {
        for c in [cat_1(), cat_2(), cat_par(), cat_x3()] {
            assert_eq!(opposite(&opposite(&c)), c);
            assert!(validate_category(&opposite(&c)).is_empty());
        }
        let op = opposite(&cat_par());
        let u = op.mor("u").unwrap();
        assert_eq!((op.obj_name(op.dom(u)), op.obj_name(op.cod(u))), ("1", "0"));
    }

    #[test]
    fn cartesian_structures() {
        let c = Arc::new(cat_01());
        let cs = find_cartesian_structure(&c).unwrap();
        let (e, one) = (c.obj("∅").unwrap(), c.obj("1").unwrap());
        assert_eq!(cs.terminal, one);
        assert_eq!(cs.product(e, e).object, e);
        assert_eq!(cs.product(e, one).object, e);
        assert_eq!(cs.product(one, one).object, one);
        assert!(verify_cartesian(&cs));

        let par = Arc::new(cat_par());
        let absent = find_cartesian_structure(&par).unwrap_err();
        assert!(absent.pairs_without_product.contains(&("1".into(), "1".into())));

        let t = Arc::new(cat_1());
        let cs = find_cartesian_structure(&t).unwrap();
        assert_eq!(cs.product(0, 0).object, 0);
    }

    #[test]
    fn naturality() {
        let par = Arc::new(cat_par());
        let c2 = Arc::new(cat_2());
        let id = FinFunctor::identity(par.clone());
        let t = NatTransf { from: id.clone(), to: id.clone(), components: par.objects().map(|x| par.id(x)).collect() };
        assert!(is_natural(&t));
        // functors CAT_2 -> CAT_PAR picking u and v; the identity-shaped
        // components give non-commuting squares
        let fu = FinFunctor::from_names(c2.clone(), par.clone(), &[("0", "0"), ("1", "1")], &[("u", "u")]).unwrap();
        let fv = FinFunctor::from_names(c2.clone(), par.clone(), &[("0", "0"), ("1", "1")], &[("u", "v")]).unwrap();
        let t = NatTransf { from: fu, to: fv, components: vec![par.id(0), par.id(1)] };
        assert!(!is_natural(&t));
    }

    #[test]
    fn functor_enumeration() {
        let c2 = Arc::new(cat_2());
        let par = Arc::new(cat_par());
        // functors CAT_2 -> CAT_PAR: 2 constants + u + v
        assert_eq!(all_functors(&c2, &par, 100).len(), 4);
        let z2 = Arc::new(cat_z2());
        assert_eq!(all_functors(&z2, &z2, 100).len(), 2);
        for f in all_functors(&par, &c2, 100) {
            assert!(validate_functor(&f).is_empty());
        }
    }

    #[test]
    fn monoidal_enumeration() {
        let s = cat_01_product_structure();
        assert!(validate_symmetric(&s).is_empty());
        let t = Arc::new(cat_1());
        assert_eq!(enumerate_symmetric_monoidal(&t, 10).len(), 1);
        let z2 = Arc::new(cat_z2());
        let structs = enumerate_symmetric_monoidal(&z2, 10);
        assert!(!structs.is_empty());
        for s in structs {
            assert!(validate_symmetric(&s).is_empty());
        }
    }
}
