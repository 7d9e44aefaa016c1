//! Weak orderings on colored vertex sequences and on graphs with nested
//! decompositions.
//!
//! Two evaluators of the decomposition ordering live here. [`cmp_dec`]
//! follows the recursive definition literally, comparing sets through their
//! cross comparison matrix. [`CertEngine`] computes for each state a
//! certificate in an interned key space whose order coincides with the
//! decomposition ordering. In [`CertMode::Minimal`] a set of tuples is
//! represented by its least element only, which is what the canonizer needs
//! and avoids enumerating child orderings once per parent ordering.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{intersect_sorted, ColoredGraph, Vertex, COLOR_MARKER};
use crate::nested::{refine, NestedDecomposition, NestedNode};

/// Default cap on the number of elements whose orderings are enumerated.
pub const DEFAULT_PERMUTATION_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpResult {
    Less,
    Greater,
    Incomparable,
}

impl CmpResult {
    pub fn reverse(self) -> Self {
        match self {
            CmpResult::Less => CmpResult::Greater,
            CmpResult::Greater => CmpResult::Less,
            CmpResult::Incomparable => CmpResult::Incomparable,
        }
    }
}

impl From<Ordering> for CmpResult {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => CmpResult::Less,
            Ordering::Greater => CmpResult::Greater,
            Ordering::Equal => CmpResult::Incomparable,
        }
    }
}

/// Normalized set of marked pairs (colored `-2`).
pub type Marks = Vec<(Vertex, Vertex)>;

fn mark_color(g: &ColoredGraph, marks: &[(Vertex, Vertex)], u: Vertex, v: Vertex) -> i32 {
    let key = (u.min(v), u.max(v));
    if u != v && marks.binary_search(&key).is_ok() {
        COLOR_MARKER
    } else {
        g.col(u, v)
    }
}

/// Row-major color matrix of a vertex sequence.
pub fn color_matrix(g: &ColoredGraph, marks: &[(Vertex, Vertex)], seq: &[Vertex]) -> Vec<i32> {
    let mut out = Vec::with_capacity(seq.len() * seq.len());
    for &u in seq {
        for &v in seq {
            out.push(mark_color(g, marks, u, v));
        }
    }
    out
}

/// `≺_seq`: compares the row-major color matrices of the two sequences,
/// shorter sequences first.
pub fn cmp_seq(g: &ColoredGraph, sigma: &[Vertex], h: &ColoredGraph, tau: &[Vertex]) -> CmpResult {
    cmp_seq_marked(g, &[], sigma, h, &[], tau)
}

pub fn cmp_seq_marked(
    g: &ColoredGraph,
    gm: &[(Vertex, Vertex)],
    sigma: &[Vertex],
    h: &ColoredGraph,
    hm: &[(Vertex, Vertex)],
    tau: &[Vertex],
) -> CmpResult {
    if sigma.len() != tau.len() {
        return sigma.len().cmp(&tau.len()).into();
    }
    let s = sigma.len();
    for i in 0..s {
        for j in 0..s {
            let a = mark_color(g, gm, sigma[i], sigma[j]);
            let b = mark_color(h, hm, tau[i], tau[j]);
            if a != b {
                return a.cmp(&b).into();
            }
        }
    }
    CmpResult::Incomparable
}

/// Sequence ordering: length first, then the first non-equivalent position.
pub fn cmp_sequences<T>(
    a: &[T],
    b: &[T],
    mut f: impl FnMut(&T, &T) -> Result<CmpResult>,
) -> Result<CmpResult> {
    if a.len() != b.len() {
        return Ok(a.len().cmp(&b.len()).into());
    }
    for (x, y) in a.iter().zip(b) {
        match f(x, y)? {
            CmpResult::Incomparable => continue,
            r => return Ok(r),
        }
    }
    Ok(CmpResult::Incomparable)
}

/// Tuple ordering: component-wise, first component first.
pub fn cmp_tuples<A, B>(
    a: &(A, B),
    b: &(A, B),
    mut first: impl FnMut(&A, &A) -> Result<CmpResult>,
    mut second: impl FnMut(&B, &B) -> Result<CmpResult>,
) -> Result<CmpResult> {
    match first(&a.0, &b.0)? {
        CmpResult::Incomparable => second(&a.1, &b.1),
        r => Ok(r),
    }
}

/// Set ordering (comparison of the sorted element sequences), decided from
/// the cross comparison matrix of the two sets.
pub fn cmp_sets<T>(
    a: &[T],
    b: &[T],
    mut f: impl FnMut(&T, &T) -> Result<CmpResult>,
) -> Result<CmpResult> {
    if a.len() != b.len() {
        return Ok(a.len().cmp(&b.len()).into());
    }
    let cross: Vec<Vec<CmpResult>> = a
        .iter()
        .map(|x| b.iter().map(|y| f(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    decide_from_cross_matrix(&cross)
}

/// Decides the set ordering from a cross comparison matrix
/// `cross[i][j] = cmp(a_i, b_j)`.
pub fn decide_from_cross_matrix(cross: &[Vec<CmpResult>]) -> Result<CmpResult> {
    let s = cross.len();
    let t = if s == 0 { 0 } else { cross[0].len() };
    if s != t {
        return Ok(s.cmp(&t).into());
    }
    let eq = |i: usize, j: usize| cross[i][j] == CmpResult::Incomparable;
    // consistency: elements equivalent to a common partner have identical rows
    for j in 0..t {
        let rows: Vec<usize> = (0..s).filter(|&i| eq(i, j)).collect();
        for w in rows.windows(2) {
            if cross[w[0]] != cross[w[1]] {
                return Err(Error::contract("element comparison is not a weak ordering"));
            }
        }
    }
    // classes where one side has more copies; keep one representative each
    let mut a_wins = Vec::new();
    for i in 0..s {
        let in_b = (0..t).filter(|&j| eq(i, j)).count();
        let in_a = match (0..t).find(|&j| eq(i, j)) {
            Some(j) => (0..s).filter(|&i2| eq(i2, j)).count(),
            None => usize::MAX,
        };
        if in_a > in_b {
            a_wins.push(i);
        }
    }
    let mut b_wins = Vec::new();
    for j in 0..t {
        let in_a = (0..s).filter(|&i| eq(i, j)).count();
        let in_b = match (0..s).find(|&i| eq(i, j)) {
            Some(i) => (0..t).filter(|&j2| eq(i, j2)).count(),
            None => usize::MAX,
        };
        if in_b > in_a {
            b_wins.push(j);
        }
    }
    if a_wins.is_empty() && b_wins.is_empty() {
        return Ok(CmpResult::Incomparable);
    }
    if a_wins
        .iter()
        .any(|&i| b_wins.iter().all(|&j| cross[i][j] == CmpResult::Less))
    {
        return Ok(CmpResult::Less);
    }
    if b_wins
        .iter()
        .any(|&j| a_wins.iter().all(|&i| cross[i][j] == CmpResult::Greater))
    {
        return Ok(CmpResult::Greater);
    }
    Err(Error::contract("element comparison is not a weak ordering"))
}

/// All orderings of `set`, in lexicographic order of vertex identifiers.
pub fn orderings(set: &[Vertex], cap: usize) -> Result<Vec<Vec<Vertex>>> {
    if set.len() > cap {
        return Err(Error::capacity(format!(
            "refusing to enumerate the {}! orderings of {:?} (cap {cap})",
            set.len(),
            set
        )));
    }
    let mut set = set.to_vec();
    set.sort_unstable();
    Ok(set.iter().copied().permutations(set.len()).collect())
}

/// `Π(c)`: orderings of the child's bag if its family is empty, otherwise
/// orderings of the adhesion set.
pub fn pi(parent: &NestedNode, child: &NestedNode, cap: usize) -> Result<Vec<Vec<Vertex>>> {
    if child.family.is_empty() {
        orderings(&child.bag, cap)
    } else {
        orderings(&intersect_sorted(&parent.bag, &child.bag), cap)
    }
}

/// A graph with a nested (sub)decomposition, an ordered root set and the
/// marked pairs accumulated by refinement.
#[derive(Clone, Debug)]
pub struct DecState {
    pub node: Arc<NestedNode>,
    pub sigma: Vec<Vertex>,
    pub marks: Marks,
}

impl DecState {
    pub fn new(node: Arc<NestedNode>, sigma: Vec<Vertex>) -> Self {
        DecState {
            node,
            sigma,
            marks: Vec::new(),
        }
    }

    fn child(&self, child: &Arc<NestedNode>, tau: Vec<Vertex>) -> Self {
        DecState {
            marks: restrict_marks(&self.marks, &child.vertices),
            node: child.clone(),
            sigma: tau,
        }
    }

    fn key(&self) -> StateKey {
        (
            Arc::as_ptr(&self.node) as usize,
            self.sigma.clone(),
            restrict_marks(&self.marks, &self.node.vertices),
        )
    }
}

type StateKey = (usize, Vec<Vertex>, Marks);
type ChildClass = Vec<(DecState, Vec<Vertex>)>;
type Orderings = Vec<Vec<Vertex>>;

fn restrict_marks(marks: &[(Vertex, Vertex)], vertices: &[Vertex]) -> Marks {
    marks
        .iter()
        .copied()
        .filter(|&(u, v)| vertices.binary_search(&u).is_ok() && vertices.binary_search(&v).is_ok())
        .collect()
}

fn add_mark(marks: &[(Vertex, Vertex)], pair: Option<(Vertex, Vertex)>) -> Marks {
    let mut out = marks.to_vec();
    if let Some((u, v)) = pair {
        out.push((u.min(v), u.max(v)));
        out.sort_unstable();
        out.dedup();
    }
    out
}

/// Refinements of a node, cached so that refined subtrees keep a stable
/// identity across lookups.
#[derive(Default)]
struct RefineCache {
    map: HashMap<(usize, usize, Vec<Vertex>), Arc<NestedNode>>,
    // keeps the keyed nodes alive so their addresses are never reused
    keep: Vec<Arc<NestedNode>>,
}

impl RefineCache {
    fn refined(&mut self, state: &DecState) -> Result<Vec<DecState>> {
        let node = &state.node;
        let ptr = Arc::as_ptr(node) as usize;
        let mut out = Vec::with_capacity(node.family.len());
        for (i, m) in node.family.iter().enumerate() {
            let key = (ptr, i, state.sigma.clone());
            let r = match self.map.get(&key) {
                Some(r) => r.clone(),
                None => {
                    let r = refine(node, i, &state.sigma)?;
                    self.keep.push(node.clone());
                    self.map.insert(key, r.clone());
                    r
                }
            };
            out.push(DecState {
                node: r,
                sigma: state.sigma.clone(),
                marks: add_mark(&state.marks, m.distinguished),
            });
        }
        Ok(out)
    }
}

/// Direct evaluator of `≺_dec` between states of two graphs.
pub struct DecComparator<'a> {
    g: &'a ColoredGraph,
    h: &'a ColoredGraph,
    cap: usize,
    memo: HashMap<(StateKey, StateKey), CmpResult>,
    refine_g: RefineCache,
    refine_h: RefineCache,
    keep: Vec<Arc<NestedNode>>,
}

impl<'a> DecComparator<'a> {
    pub fn new(g: &'a ColoredGraph, h: &'a ColoredGraph) -> Self {
        DecComparator {
            g,
            h,
            cap: DEFAULT_PERMUTATION_CAP,
            memo: HashMap::new(),
            refine_g: RefineCache::default(),
            refine_h: RefineCache::default(),
            keep: Vec::new(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Compares a state of the first graph with a state of the second.
    pub fn compare(&mut self, a: &DecState, b: &DecState) -> Result<CmpResult> {
        let key = (a.key(), b.key());
        if let Some(&r) = self.memo.get(&key) {
            return Ok(r);
        }
        let r = self.compare_uncached(a, b)?;
        self.keep.push(a.node.clone());
        self.keep.push(b.node.clone());
        self.memo.insert(key, r);
        Ok(r)
    }

    fn compare_uncached(&mut self, a: &DecState, b: &DecState) -> Result<CmpResult> {
        let (na, nb) = (&a.node, &b.node);
        let by_size = na
            .size
            .cmp(&nb.size)
            .then(na.family.len().cmp(&nb.family.len()));
        if by_size != Ordering::Equal {
            return Ok(by_size.into());
        }
        if na.size == 1 {
            return Ok(cmp_seq_marked(
                self.g, &a.marks, &a.sigma, self.h, &b.marks, &b.sigma,
            ));
        }
        if na.family.is_empty() {
            let ca = self.child_classes(a)?;
            let cb = self.child_classes(b)?;
            let (g, h) = (self.g, self.h);
            return cmp_sets(&ca, &cb, |x, y| {
                cmp_sets(x, y, |s, t| {
                    cmp_tuples(
                        s,
                        t,
                        |p, q| self.compare(p, q),
                        |p: &Vec<Vertex>, q: &Vec<Vertex>| {
                            Ok(cmp_seq_marked(g, &a.marks, p, h, &b.marks, q))
                        },
                    )
                })
            });
        }
        let ra = self.refine_g.refined(a)?;
        let rb = self.refine_h.refined(b)?;
        cmp_sets(&ra, &rb, |x, y| self.compare(x, y))
    }

    fn child_classes(&self, s: &DecState) -> Result<Vec<ChildClass>> {
        s.node
            .children
            .iter()
            .map(|c| {
                pi(&s.node, c, self.cap)?
                    .into_iter()
                    .map(|tau| {
                        let mut st = s.sigma.clone();
                        st.extend(&tau);
                        Ok((s.child(c, tau), st))
                    })
                    .collect()
            })
            .collect()
    }
}

/// `≺_dec` between `(G, D̄, σ)` and `(H, D̄', τ)`.
pub fn cmp_dec(
    g: &ColoredGraph,
    dg: &NestedDecomposition,
    sigma: &[Vertex],
    h: &ColoredGraph,
    dh: &NestedDecomposition,
    tau: &[Vertex],
) -> Result<CmpResult> {
    check_root_set(&dg.root, sigma)?;
    check_root_set(&dh.root, tau)?;
    DecComparator::new(g, h).compare(
        &DecState::new(dg.root.clone(), sigma.to_vec()),
        &DecState::new(dh.root.clone(), tau.to_vec()),
    )
}

fn check_root_set(node: &NestedNode, sigma: &[Vertex]) -> Result<()> {
    let mut set = sigma.to_vec();
    set.sort_unstable();
    let distinct = set.windows(2).all(|w| w[0] != w[1]);
    if !distinct || !crate::nested::is_root_set(node, &set) {
        return Err(Error::domain(format!(
            "{sigma:?} is not an ordered root set"
        )));
    }
    Ok(())
}

/// Interned certificate keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Int(u64),
    Colors(Box<[i32]>),
    Seq(Box<[u32]>),
}

/// Interner for certificate keys together with a cache of their comparisons.
/// Keys are equal exactly if their ids are equal.
#[derive(Default)]
pub struct Interner {
    keys: Vec<Key>,
    ids: HashMap<Key, u32>,
    cmp_cache: HashMap<(u32, u32), Ordering>,
}

pub type CertId = u32;

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, key: Key) -> CertId {
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.keys.len() as u32;
        self.keys.push(key.clone());
        self.ids.insert(key, id);
        id
    }

    fn int(&mut self, v: u64) -> CertId {
        self.intern(Key::Int(v))
    }

    fn colors(&mut self, c: Vec<i32>) -> CertId {
        self.intern(Key::Colors(c.into_boxed_slice()))
    }

    fn seq(&mut self, s: Vec<CertId>) -> CertId {
        self.intern(Key::Seq(s.into_boxed_slice()))
    }

    /// Order of two interned keys: integers numerically, color matrices and
    /// sequences by length and then lexicographically.
    pub fn compare(&mut self, a: CertId, b: CertId) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        if let Some(&o) = self.cmp_cache.get(&(a, b)) {
            return o;
        }
        let o = match (&self.keys[a as usize], &self.keys[b as usize]) {
            (Key::Int(x), Key::Int(y)) => x.cmp(y),
            (Key::Colors(x), Key::Colors(y)) => x.len().cmp(&y.len()).then_with(|| x.cmp(y)),
            (Key::Seq(x), Key::Seq(y)) => {
                if x.len() != y.len() {
                    x.len().cmp(&y.len())
                } else {
                    let (x, y) = (x.clone(), y.clone());
                    let mut o = Ordering::Equal;
                    for (p, q) in x.iter().zip(y.iter()) {
                        o = self.compare(*p, *q);
                        if o != Ordering::Equal {
                            break;
                        }
                    }
                    o
                }
            }
            (x, y) => variant(x).cmp(&variant(y)),
        };
        self.cmp_cache.insert((a, b), o);
        self.cmp_cache.insert((b, a), o.reverse());
        o
    }

    fn sort(&mut self, ids: &mut [CertId]) {
        ids.sort_by(|&a, &b| self.compare(a, b));
    }
}

fn variant(k: &Key) -> u8 {
    match k {
        Key::Int(_) => 0,
        Key::Colors(_) => 1,
        Key::Seq(_) => 2,
    }
}

/// How sets of tuples enter a certificate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CertMode {
    /// The sorted multiset; certificate order is the decomposition ordering.
    Exact,
    /// The least element; equal certificates still mean isomorphic states.
    #[default]
    Minimal,
}

/// Certificates of states of one graph. In exact mode `cert(a) < cert(b)` in
/// the interner order exactly if `a ≺_dec b`, and equal certificates mean
/// incomparable states.
pub struct CertEngine<'a> {
    g: &'a ColoredGraph,
    cap: usize,
    mode: CertMode,
    memo: HashMap<StateKey, CertId>,
    // least child certificate and the orderings attaining it, per child state
    best: HashMap<(usize, Marks), (CertId, Orderings)>,
    refine: RefineCache,
    keep: Vec<Arc<NestedNode>>,
}

impl<'a> CertEngine<'a> {
    pub fn new(g: &'a ColoredGraph) -> Self {
        CertEngine {
            g,
            cap: DEFAULT_PERMUTATION_CAP,
            mode: CertMode::Exact,
            memo: HashMap::new(),
            best: HashMap::new(),
            refine: RefineCache::default(),
            keep: Vec::new(),
        }
    }

    pub fn with_mode(mut self, mode: CertMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn graph(&self) -> &'a ColoredGraph {
        self.g
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn cert(&mut self, it: &mut Interner, s: &DecState) -> Result<CertId> {
        let key = s.key();
        if let Some(&c) = self.memo.get(&key) {
            return Ok(c);
        }
        let node = &s.node;
        let size = it.int(node.size);
        let fam = it.int(node.family.len() as u64);
        let body = if node.size == 1 {
            it.colors(color_matrix(self.g, &s.marks, &s.sigma))
        } else if node.family.is_empty() {
            let mut classes = Vec::with_capacity(node.children.len());
            for c in &node.children {
                classes.push(self.class_cert(it, s, c)?);
            }
            it.sort(&mut classes);
            it.seq(classes)
        } else {
            let mut refined = Vec::new();
            for r in self.refined(s)? {
                refined.push(self.cert(it, &r)?);
            }
            it.sort(&mut refined);
            if self.mode == CertMode::Minimal {
                refined.truncate(1);
            }
            it.seq(refined)
        };
        let c = it.seq(vec![size, fam, body]);
        self.keep.push(node.clone());
        self.memo.insert(key, c);
        Ok(c)
    }

    /// The states obtained by refining `s` with each family member, with the
    /// member's distinguished pair marked.
    pub fn refined(&mut self, s: &DecState) -> Result<Vec<DecState>> {
        self.refine.refined(s)
    }

    /// Certificate of the tuple `((c, τ), στ)`.
    pub fn tuple_cert(
        &mut self,
        it: &mut Interner,
        s: &DecState,
        c: &Arc<NestedNode>,
        tau: &[Vertex],
    ) -> Result<CertId> {
        let child = self.cert(it, &s.child(c, tau.to_vec()))?;
        let mut st = s.sigma.clone();
        st.extend_from_slice(tau);
        let seq = it.colors(color_matrix(self.g, &s.marks, &st));
        Ok(it.seq(vec![child, seq]))
    }

    /// Certificate of the set of tuples of child `c` over `Π(c)`.
    pub fn class_cert(
        &mut self,
        it: &mut Interner,
        s: &DecState,
        c: &Arc<NestedNode>,
    ) -> Result<CertId> {
        let mut tuples = Vec::new();
        for tau in self.candidates(it, s, c)? {
            tuples.push(self.tuple_cert(it, s, c, &tau)?);
        }
        it.sort(&mut tuples);
        if self.mode == CertMode::Minimal {
            tuples.truncate(1);
        }
        Ok(it.seq(tuples))
    }

    /// Orderings of `Π(c)` that can yield the least tuple: all of them in
    /// exact mode, those minimizing the child certificate in minimal mode.
    pub fn candidates(
        &mut self,
        it: &mut Interner,
        s: &DecState,
        c: &Arc<NestedNode>,
    ) -> Result<Vec<Vec<Vertex>>> {
        if self.mode == CertMode::Exact {
            return pi(&s.node, c, self.cap);
        }
        let marks = restrict_marks(&s.marks, &c.vertices);
        let key = (Arc::as_ptr(c) as usize, marks.clone());
        if let Some((_, t)) = self.best.get(&key) {
            return Ok(t.clone());
        }
        let all = pi(&s.node, c, self.cap)?;
        let best = if c.size == 1 {
            // a single bag: its certificate orders like its color matrix
            let mut min: Option<Vec<i32>> = None;
            let mut best = Vec::new();
            for tau in all {
                let m = color_matrix(self.g, &marks, &tau);
                match min.as_ref().map(|x| m.cmp(x)) {
                    Some(Ordering::Greater) => {}
                    Some(Ordering::Equal) => best.push(tau),
                    _ => {
                        min = Some(m);
                        best = vec![tau];
                    }
                }
            }
            let cert = self.cert(it, &s.child(c, best[0].clone()))?;
            (cert, best)
        } else {
            let mut min: Option<CertId> = None;
            let mut best = Vec::new();
            for tau in all {
                let cert = self.cert(it, &s.child(c, tau.clone()))?;
                match min.map(|x| it.compare(cert, x)) {
                    Some(Ordering::Greater) => {}
                    Some(Ordering::Equal) => best.push(tau),
                    _ => {
                        min = Some(cert);
                        best = vec![tau];
                    }
                }
            }
            (min.expect("Π is never empty"), best)
        };
        self.keep.push(c.clone());
        let t = best.1.clone();
        self.best.insert(key, best);
        Ok(t)
    }

    pub fn child_state(&self, s: &DecState, c: &Arc<NestedNode>, tau: Vec<Vertex>) -> DecState {
        s.child(c, tau)
    }
}

/// `≺_dec` through certificates; agrees with [`cmp_dec`].
pub fn cmp_dec_by_certificates(
    g: &ColoredGraph,
    dg: &NestedDecomposition,
    sigma: &[Vertex],
    h: &ColoredGraph,
    dh: &NestedDecomposition,
    tau: &[Vertex],
) -> Result<CmpResult> {
    check_root_set(&dg.root, sigma)?;
    check_root_set(&dh.root, tau)?;
    let mut it = Interner::new();
    let a = CertEngine::new(g).cert(&mut it, &DecState::new(dg.root.clone(), sigma.to_vec()))?;
    let b = CertEngine::new(h).cert(&mut it, &DecState::new(dh.root.clone(), tau.to_vec()))?;
    Ok(it.compare(a, b).into())
}
