//! Finite Nelson algebras given by operation tables.
//!
//! The carrier is always `0..size`. [`Tables`] holds shape-checked tables
//! that need not satisfy any axiom (axiom checking runs on it);
//! [`NelsonAlgebra`] wraps tables known to satisfy N1–N8 and the order
//! conditions. The order is never stored: `a <= b` iff `a /\ b = a`.

use std::collections::{BTreeMap, HashMap};
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::Subset;
use crate::term::{self, Equation, Term};

pub type Elem = usize;

/// On-disk algebra format: row-major tables, 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub size: i64,
    pub top: i64,
    pub neg: Vec<i64>,
    pub meet: Vec<Vec<i64>>,
    pub join: Vec<Vec<i64>>,
    pub imp: Vec<Vec<i64>>,
}

/// Shape-checked operation tables of an algebra of type (1, ∼, ∧, ∨, →).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tables {
    size: usize,
    top: Elem,
    neg: Vec<Elem>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    imp: Vec<Elem>,
}

fn check_index(field: &str, v: i64, size: usize) -> Result<Elem> {
    if v < 0 || v as usize >= size {
        return Err(Error::format(
            field,
            format!("value {v} outside carrier 0..{size}"),
        ));
    }
    Ok(v as usize)
}

fn flatten_table(name: &str, rows: &[Vec<i64>], size: usize) -> Result<Vec<Elem>> {
    if rows.len() != size {
        return Err(Error::format(
            name,
            format!("has {} rows, expected {size}", rows.len()),
        ));
    }
    let mut out = Vec::with_capacity(size * size);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != size {
            return Err(Error::format(
                format!("{name}[{i}]"),
                format!("has length {}, expected {size}", row.len()),
            ));
        }
        for (j, &v) in row.iter().enumerate() {
            out.push(check_index(&format!("{name}[{i}][{j}]"), v, size)?);
        }
    }
    Ok(out)
}

impl Tables {
    /// Builds tables from flat row-major vectors, checking lengths and ranges.
    pub fn new(
        size: usize,
        top: Elem,
        neg: Vec<Elem>,
        meet: Vec<Elem>,
        join: Vec<Elem>,
        imp: Vec<Elem>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::format("size", "carrier must be nonempty"));
        }
        if top >= size {
            return Err(Error::format("top", format!("value {top} outside carrier 0..{size}")));
        }
        if neg.len() != size {
            return Err(Error::format("neg", format!("has length {}, expected {size}", neg.len())));
        }
        for (name, t) in [("meet", &meet), ("join", &join), ("imp", &imp)] {
            if t.len() != size * size {
                return Err(Error::format(
                    name,
                    format!("has {} entries, expected {}", t.len(), size * size),
                ));
            }
        }
        for (name, t) in [("neg", &neg), ("meet", &meet), ("join", &join), ("imp", &imp)] {
            if let Some(p) = t.iter().position(|&v| v >= size) {
                let field = if name == "neg" {
                    format!("neg[{p}]")
                } else {
                    format!("{name}[{}][{}]", p / size, p % size)
                };
                return Err(Error::format(field, format!("value {} outside carrier 0..{size}", t[p])));
            }
        }
        Ok(Tables {
            size,
            top,
            neg,
            meet,
            join,
            imp,
        })
    }

    /// Tabulates the operations from closures.
    pub fn from_fns(
        size: usize,
        top: Elem,
        neg: impl Fn(Elem) -> Elem,
        meet: impl Fn(Elem, Elem) -> Elem,
        join: impl Fn(Elem, Elem) -> Elem,
        imp: impl Fn(Elem, Elem) -> Elem,
    ) -> Result<Self> {
        let pairs = || (0..size).flat_map(move |a| (0..size).map(move |b| (a, b)));
        Tables::new(
            size,
            top,
            (0..size).map(neg).collect(),
            pairs().map(|(a, b)| meet(a, b)).collect(),
            pairs().map(|(a, b)| join(a, b)).collect(),
            pairs().map(|(a, b)| imp(a, b)).collect(),
        )
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        if file.size <= 0 {
            return Err(Error::format("size", format!("must be positive, got {}", file.size)));
        }
        let size = file.size as usize;
        let top = check_index("top", file.top, size)?;
        if file.neg.len() != size {
            return Err(Error::format(
                "neg",
                format!("has length {}, expected {size}", file.neg.len()),
            ));
        }
        let neg = file
            .neg
            .iter()
            .enumerate()
            .map(|(i, &v)| check_index(&format!("neg[{i}]"), v, size))
            .collect::<Result<Vec<_>>>()?;
        let meet = flatten_table("meet", &file.meet, size)?;
        let join = flatten_table("join", &file.join, size)?;
        let imp = flatten_table("imp", &file.imp, size)?;
        Tables::new(size, top, neg, meet, join, imp)
    }

    pub fn to_file(&self) -> AlgebraFile {
        let rows = |t: &[Elem]| -> Vec<Vec<i64>> {
            t.chunks(self.size)
                .map(|r| r.iter().map(|&v| v as i64).collect())
                .collect()
        };
        AlgebraFile {
            size: self.size as i64,
            top: self.top as i64,
            neg: self.neg.iter().map(|&v| v as i64).collect(),
            meet: rows(&self.meet),
            join: rows(&self.join),
            imp: rows(&self.imp),
        }
    }

    /// Parses the JSON algebra format. Syntax errors carry line and column;
    /// shape errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| {
            Error::format(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        Tables::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("algebra file serializes")
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn top(&self) -> Elem {
        self.top
    }

    /// `0 = ∼1`.
    #[inline]
    pub fn bottom(&self) -> Elem {
        self.neg[self.top]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.size + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.size + b]
    }

    #[inline]
    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.imp[a * self.size + b]
    }

    /// Weak negation `a -> 0`.
    #[inline]
    pub fn weak_neg(&self, a: Elem) -> Elem {
        self.imp(a, self.bottom())
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.meet(a, b) == a
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    /// Copy of the tables with the implication table transposed.
    pub fn with_transposed_imp(&self) -> Tables {
        let n = self.size;
        let mut t = self.clone();
        for a in 0..n {
            for b in 0..n {
                t.imp[a * n + b] = self.imp[b * n + a];
            }
        }
        t
    }

    /// Copy of the tables with one implication entry overwritten.
    pub fn with_imp_entry(&self, a: Elem, b: Elem, value: Elem) -> Result<Tables> {
        let mut t = self.clone();
        t.imp[a * self.size + b] = value;
        Tables::new(t.size, t.top, t.neg, t.meet, t.join, t.imp)
    }

    /// Copy with the negations of `a` and `b` exchanged.
    pub fn with_swapped_neg(&self, a: Elem, b: Elem) -> Tables {
        let mut t = self.clone();
        t.neg.swap(a, b);
        t
    }

    pub fn with_meet_entry(&self, a: Elem, b: Elem, value: Elem) -> Result<Tables> {
        let mut t = self.clone();
        t.meet[a * self.size + b] = value;
        Tables::new(t.size, t.top, t.neg, t.meet, t.join, t.imp)
    }

    pub fn with_join_entry(&self, a: Elem, b: Elem, value: Elem) -> Result<Tables> {
        let mut t = self.clone();
        t.join[a * self.size + b] = value;
        Tables::new(t.size, t.top, t.neg, t.meet, t.join, t.imp)
    }

    pub fn with_top(&self, top: Elem) -> Result<Tables> {
        let t = self.clone();
        Tables::new(t.size, top, t.neg, t.meet, t.join, t.imp)
    }

    /// Evaluates a term under an assignment of variables to carrier indices.
    pub fn eval(&self, t: &Term, env: &BTreeMap<String, Elem>) -> Result<Elem> {
        Ok(match t {
            Term::Var(v) => *env.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            Term::Zero => self.bottom(),
            Term::One => self.top,
            Term::Neg(a) => self.neg(self.eval(a, env)?),
            Term::Meet(a, b) => self.meet(self.eval(a, env)?, self.eval(b, env)?),
            Term::Join(a, b) => self.join(self.eval(a, env)?, self.eval(b, env)?),
            Term::Imp(a, b) => self.imp(self.eval(a, env)?, self.eval(b, env)?),
        })
    }

    /// Exhaustively checks an identity. The counterexample returned is the
    /// first in canonical order: variables sorted by name, the first variable
    /// most significant, values ascending.
    pub fn check_identity(&self, e: &Equation) -> IdentityCheck {
        let vars: Vec<String> = e.variables().into_iter().collect();
        let lhs = Compiled::new(&e.lhs, &vars);
        let rhs = Compiled::new(&e.rhs, &vars);
        match first_failure(self.size, vars.len(), |vals| {
            lhs.eval(self, vals) == rhs.eval(self, vals)
        }) {
            None => IdentityCheck::Holds,
            Some(vals) => IdentityCheck::Counterexample(vars.into_iter().zip(vals).collect()),
        }
    }

    pub fn holds(&self, e: &Equation) -> bool {
        self.check_identity(e).holds()
    }

    /// Checks every axiom of the chosen axiomatization exhaustively.
    pub fn check_axioms(&self, variant: AxiomVariant) -> AxiomReport {
        let results = axioms(variant)
            .into_iter()
            .map(|(name, eq)| RuleResult::from_identity(name, self.check_identity(&eq)))
            .collect();
        AxiomReport { variant, results }
    }

    /// Checks that `<=` (via meet) is a partial order with greatest element
    /// `top` and least element `∼top`.
    pub fn check_order(&self) -> Vec<RuleResult> {
        let n = self.size;
        let reflexive = first_failure(n, 1, |v| self.leq(v[0], v[0]));
        let antisymmetric = first_failure(n, 2, |v| {
            !(self.leq(v[0], v[1]) && self.leq(v[1], v[0])) || v[0] == v[1]
        });
        let transitive = first_failure(n, 3, |v| {
            !(self.leq(v[0], v[1]) && self.leq(v[1], v[2])) || self.leq(v[0], v[2])
        });
        let greatest = first_failure(n, 1, |v| self.leq(v[0], self.top));
        let least = first_failure(n, 1, |v| self.leq(self.bottom(), v[0]));
        vec![
            RuleResult::from_values("reflexive", &["x"], reflexive),
            RuleResult::from_values("antisymmetric", &["x", "y"], antisymmetric),
            RuleResult::from_values("transitive", &["x", "y", "z"], transitive),
            RuleResult::from_values("top greatest", &["x"], greatest),
            RuleResult::from_values("bottom least", &["x"], least),
        ]
    }
}

/// A term compiled against a fixed variable order.
struct Compiled {
    nodes: Vec<Node>,
}

#[derive(Clone, Copy)]
enum Node {
    Var(usize),
    Zero,
    One,
    Neg(usize),
    Meet(usize, usize),
    Join(usize, usize),
    Imp(usize, usize),
}

impl Compiled {
    fn new(t: &Term, vars: &[String]) -> Self {
        let mut c = Compiled { nodes: Vec::new() };
        c.push(t, vars);
        c
    }

    fn push(&mut self, t: &Term, vars: &[String]) -> usize {
        let node = match t {
            Term::Var(v) => Node::Var(vars.iter().position(|x| x == v).expect("variable listed")),
            Term::Zero => Node::Zero,
            Term::One => Node::One,
            Term::Neg(a) => Node::Neg(self.push(a, vars)),
            Term::Meet(a, b) => Node::Meet(self.push(a, vars), self.push(b, vars)),
            Term::Join(a, b) => Node::Join(self.push(a, vars), self.push(b, vars)),
            Term::Imp(a, b) => Node::Imp(self.push(a, vars), self.push(b, vars)),
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn eval(&self, a: &Tables, vals: &[Elem]) -> Elem {
        let mut out = vec![0; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            out[i] = match *node {
                Node::Var(v) => vals[v],
                Node::Zero => a.bottom(),
                Node::One => a.top(),
                Node::Neg(x) => a.neg(out[x]),
                Node::Meet(x, y) => a.meet(out[x], out[y]),
                Node::Join(x, y) => a.join(out[x], out[y]),
                Node::Imp(x, y) => a.imp(out[x], out[y]),
            };
        }
        *out.last().expect("nonempty term")
    }
}

/// First tuple in `0..size` ^ `arity` (lexicographic, first coordinate most
/// significant) for which `ok` is false.
pub(crate) fn first_failure(
    size: usize,
    arity: usize,
    mut ok: impl FnMut(&[Elem]) -> bool,
) -> Option<Vec<Elem>> {
    let mut vals = vec![0; arity];
    loop {
        if !ok(&vals) {
            return Some(vals);
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            vals[i] += 1;
            if vals[i] < size {
                break;
            }
            vals[i] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IdentityCheck {
    Holds,
    /// Assignment in canonical variable order.
    Counterexample(Vec<(String, Elem)>),
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        matches!(self, IdentityCheck::Holds)
    }

    pub fn witness(&self) -> Option<&[(String, Elem)]> {
        match self {
            IdentityCheck::Holds => None,
            IdentityCheck::Counterexample(w) => Some(w),
        }
    }

    pub fn env(&self) -> Option<BTreeMap<String, Elem>> {
        self.witness().map(|w| w.iter().cloned().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomVariant {
    /// N1–N8.
    Main,
    /// The ten-axiom presentation N1–N10 with `x \/ 1 = 1` and `x -> (y /\ z)`.
    Brignole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleResult {
    pub name: String,
    /// Failing assignment, if any.
    pub witness: Option<Vec<(String, Elem)>>,
}

impl RuleResult {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    fn from_identity(name: &str, c: IdentityCheck) -> Self {
        RuleResult {
            name: name.to_string(),
            witness: c.witness().map(|w| w.to_vec()),
        }
    }

    pub(crate) fn from_values(name: &str, vars: &[&str], vals: Option<Vec<Elem>>) -> Self {
        RuleResult {
            name: name.to_string(),
            witness: vals.map(|v| vars.iter().map(|s| s.to_string()).zip(v).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub variant: AxiomVariant,
    pub results: Vec<RuleResult>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(RuleResult::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RuleResult> {
        self.results.iter().filter(|r| !r.holds())
    }

    pub fn get(&self, name: &str) -> Option<&RuleResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

fn eq(s: &str) -> Equation {
    term::parse_equation(s).expect("built-in axiom parses")
}

/// The axioms of a variant, as named equations.
pub fn axioms(variant: AxiomVariant) -> Vec<(&'static str, Equation)> {
    match variant {
        AxiomVariant::Main => vec![
            ("N1", eq("x /\\ (x \\/ y) = x")),
            ("N2", eq("x /\\ (y \\/ z) = (z /\\ x) \\/ (y /\\ x)")),
            ("N3", eq("~~x = x")),
            ("N4", eq("~(x \\/ y) = ~x /\\ ~y")),
            ("N5", eq("x /\\ ~x = (x /\\ ~x) /\\ (y \\/ ~y)")),
            ("N6", eq("x -> x = 1")),
            ("N7", eq("x -> (y -> z) = (x /\\ y) -> z")),
            ("N8", eq("x /\\ (x -> y) = x /\\ (~x \\/ y)")),
        ],
        AxiomVariant::Brignole => vec![
            ("N1", eq("x \\/ 1 = 1")),
            ("N2", eq("x /\\ (x \\/ y) = x")),
            ("N3", eq("x /\\ (y \\/ z) = (z /\\ x) \\/ (y /\\ x)")),
            ("N4", eq("~~x = x")),
            ("N5", eq("~(x /\\ y) = ~x \\/ ~y")),
            ("N6", eq("x /\\ ~x = (x /\\ ~x) /\\ (y \\/ ~y)")),
            ("N7", eq("x -> x = 1")),
            ("N8", eq("(~x \\/ y) /\\ (x -> y) = ~x \\/ y")),
            ("N9", eq("x /\\ (x -> y) = x /\\ (~x \\/ y)")),
            ("N10", eq("x -> (y /\\ z) = (x -> y) /\\ (x -> z)")),
        ],
    }
}

/// Tables verified to satisfy N1–N8, with `<=` a partial order bounded by
/// `∼top` and `top`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NelsonAlgebra {
    tables: Tables,
}

impl Deref for NelsonAlgebra {
    type Target = Tables;

    fn deref(&self) -> &Tables {
        &self.tables
    }
}

impl TryFrom<Tables> for NelsonAlgebra {
    type Error = Error;

    fn try_from(tables: Tables) -> Result<Self> {
        let report = tables.check_axioms(AxiomVariant::Main);
        if let Some(f) = report.failures().next() {
            return Err(Error::InvalidArgument(format!(
                "axiom {} fails at {:?}",
                f.name,
                f.witness.as_deref().unwrap_or_default()
            )));
        }
        if let Some(f) = tables.check_order().into_iter().find(|r| !r.holds()) {
            return Err(Error::InvalidArgument(format!(
                "order condition `{}` fails at {:?}",
                f.name,
                f.witness.unwrap_or_default()
            )));
        }
        Ok(NelsonAlgebra { tables })
    }
}

impl NelsonAlgebra {
    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    pub fn into_tables(self) -> Tables {
        self.tables
    }

    /// Wraps tables without re-verifying the axioms. Only for tables built
    /// by operations that preserve the axioms (products, subalgebras,
    /// quotients).
    pub(crate) fn trusted(tables: Tables) -> Self {
        debug_assert!(tables.size > 24 || tables.check_axioms(AxiomVariant::Main).all_hold());
        NelsonAlgebra { tables }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Tables::from_json(text)?.try_into()
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    pub fn is_five_valued(&self) -> bool {
        self.holds(&term::nt3())
    }

    pub fn is_linear(&self) -> bool {
        self.holds(&term::linearity())
    }

    /// Whether the order is total.
    pub fn is_chain(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    /// Elements listed bottom to top, if the algebra is a chain.
    pub fn chain_order(&self) -> Option<Vec<Elem>> {
        if !self.is_chain() {
            return None;
        }
        let mut v: Vec<Elem> = self.elements().collect();
        v.sort_by_key(|&a| self.elements().filter(|&b| self.leq(b, a)).count());
        Some(v)
    }

    /// Principal filter `[a)`.
    pub fn up(&self, a: Elem) -> Subset {
        Subset::from_predicate(self.size(), |x| self.leq(a, x))
    }

    /// `∼X = {∼x : x ∈ X}`.
    pub fn neg_set(&self, s: &Subset) -> Subset {
        s.map(|x| self.neg(x))
    }

    /// Checks the derived calculation rules N9–N20.
    pub fn check_derived_rules(&self) -> AxiomReport {
        self.check_derived_rules_with(DerivedRuleConfig::default())
    }

    pub fn check_derived_rules_with(&self, config: DerivedRuleConfig) -> AxiomReport {
        let n = self.size();
        let mut results = Vec::new();
        let identity = |name: &str, s: &str| RuleResult::from_identity(name, self.check_identity(&eq(s)));
        results.push(identity("N9", "(x \\/ y) -> z = (x -> z) /\\ (y -> z)"));
        results.push(identity("N10", "x -> (y -> z) = y -> (x -> z)"));
        results.push(identity("N11", "x -> (y -> z) = (x -> y) -> (x -> z)"));
        results.push(RuleResult::from_values(
            "N12",
            &["x", "y"],
            first_failure(n, 2, |v| self.leq(self.weak_neg(v[0]), self.imp(v[0], v[1]))),
        ));
        results.push(identity("N13", "(x /\\ ~x) -> y = 1"));
        results.push(RuleResult::from_values(
            "N14",
            &["x", "y"],
            first_failure(n, 2, |v| {
                let i = self.imp(v[0], v[1]);
                self.leq(self.neg(v[0]), i) && self.leq(v[1], i)
            }),
        ));
        results.push(RuleResult::from_values(
            "N15",
            &["x", "y", "z"],
            first_failure(n, 3, |v| {
                !self.leq(v[0], v[1]) || self.leq(self.imp(v[1], v[2]), self.imp(v[0], v[2]))
            }),
        ));
        results.push(identity("N16", "1 -> x = x"));
        results.push(RuleResult::from_values(
            "N17",
            &["x", "y"],
            first_failure(n, 2, |v| !self.leq(v[0], v[1]) || self.imp(v[0], v[1]) == self.top()),
        ));
        results.push(RuleResult::from_values(
            "N18",
            &["x", "y"],
            first_failure(n, 2, |v| {
                let (x, y) = (v[0], v[1]);
                let all_one = [
                    self.imp(x, y),
                    self.imp(y, x),
                    self.imp(self.neg(y), self.neg(x)),
                    self.imp(self.neg(x), self.neg(y)),
                ]
                .iter()
                .all(|&t| t == self.top());
                (x == y) == all_one
            }),
        ));
        results.push(self.check_n19(config));
        results.push(identity("N20", "x -> (x -> y) = x -> y"));
        AxiomReport {
            variant: AxiomVariant::Main,
            results,
        }
    }

    /// `∼(X ∩ Y) = ∼X ∩ ∼Y` over all subset pairs up to the configured size,
    /// otherwise over a seeded sample of pairs. Witnesses are the two subsets
    /// encoded as bitmask integers (`X`, `Y`) for small carriers.
    fn check_n19(&self, config: DerivedRuleConfig) -> RuleResult {
        let n = self.size();
        if n <= config.n19_exhaustive_max && n <= 20 {
            let images: Vec<u32> = (0u32..1 << n)
                .map(|m| {
                    (0..n)
                        .filter(|&i| m >> i & 1 == 1)
                        .fold(0u32, |acc, i| acc | 1 << self.neg(i))
                })
                .collect();
            for x in 0u32..1 << n {
                for y in 0u32..1 << n {
                    if images[(x & y) as usize] != images[x as usize] & images[y as usize] {
                        return RuleResult::from_values(
                            "N19",
                            &["X", "Y"],
                            Some(vec![x as usize, y as usize]),
                        );
                    }
                }
            }
            return RuleResult::from_values("N19", &["X", "Y"], None);
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.n19_seed);
        for _ in 0..config.n19_samples {
            let x = Subset::from_predicate(n, |_| rng.gen_bool(0.5));
            let y = Subset::from_predicate(n, |_| rng.gen_bool(0.5));
            if self.neg_set(&x.intersection(&y)) != self.neg_set(&x).intersection(&self.neg_set(&y)) {
                return RuleResult {
                    name: "N19".into(),
                    witness: Some(vec![
                        ("X".into(), x.iter().fold(0, |a, i| a | 1 << (i % 64))),
                        ("Y".into(), y.iter().fold(0, |a, i| a | 1 << (i % 64))),
                    ]),
                };
            }
        }
        RuleResult::from_values("N19", &["X", "Y"], None)
    }
}

/// Budget for the set-level rule N19.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedRuleConfig {
    /// Largest carrier checked over all pairs of subsets.
    pub n19_exhaustive_max: usize,
    pub n19_samples: usize,
    pub n19_seed: u64,
}

impl Default for DerivedRuleConfig {
    fn default() -> Self {
        DerivedRuleConfig {
            n19_exhaustive_max: 12,
            n19_samples: 10_000,
            n19_seed: 0x4e45_4c53_4f4e_0019,
        }
    }
}

/// The chain `C_n` on `{0, 1/(n-1), ..., 1}`, index `j` encoding `j/(n-1)`.
/// `x -> y` is `1` when `x <= y` or `x <= ∼x`, and `∼x \/ y` otherwise.
pub fn make_chain(n: usize) -> Result<NelsonAlgebra> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("chain needs at least 2 elements, got {n}")));
    }
    let top = n - 1;
    let neg = |j: Elem| top - j;
    let tables = Tables::from_fns(
        n,
        top,
        neg,
        |a, b| a.min(b),
        |a, b| a.max(b),
        |a, b| {
            if a <= b || a <= neg(a) {
                top
            } else {
                neg(a).max(b)
            }
        },
    )?;
    Ok(NelsonAlgebra::trusted(tables))
}

/// Mixed-radix encoding of product tuples; the first factor is most
/// significant, so indices follow lexicographic order of tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radix {
    sizes: Vec<usize>,
}

impl Radix {
    pub fn new(sizes: Vec<usize>) -> Self {
        Radix { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn encode(&self, coords: &[Elem]) -> Elem {
        coords
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&c, &s)| acc * s + c)
    }

    pub fn decode(&self, mut idx: Elem) -> Vec<Elem> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &s) in out.iter_mut().zip(&self.sizes).rev() {
            *slot = idx % s;
            idx /= s;
        }
        out
    }
}

/// Direct product with componentwise operations, indexed by [`Radix`].
pub fn product(factors: &[&NelsonAlgebra]) -> Result<NelsonAlgebra> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("product of an empty list".into()));
    }
    let radix = Radix::new(factors.iter().map(|f| f.size()).collect());
    let size = radix.total();
    let coords: Vec<Vec<Elem>> = (0..size).map(|i| radix.decode(i)).collect();
    let (coords, radix) = (&coords, &radix);
    let binary = |op: fn(&Tables, Elem, Elem) -> Elem| {
        move |a: Elem, b: Elem| {
            let c: Vec<Elem> = factors
                .iter()
                .enumerate()
                .map(|(k, f)| op(f, coords[a][k], coords[b][k]))
                .collect();
            radix.encode(&c)
        }
    };
    let top = radix.encode(&factors.iter().map(|f| f.top()).collect::<Vec<_>>());
    let tables = Tables::from_fns(
        size,
        top,
        |a| {
            let c: Vec<Elem> = factors
                .iter()
                .enumerate()
                .map(|(k, f)| f.neg(coords[a][k]))
                .collect();
            radix.encode(&c)
        },
        binary(Tables::meet),
        binary(Tables::join),
        binary(Tables::imp),
    )?;
    Ok(NelsonAlgebra::trusted(tables))
}

/// Smallest subset containing `seeds` and `top` closed under all operations.
pub fn subalgebra_closure(a: &Tables, seeds: &[Elem]) -> Subset {
    let mut members = Subset::empty(a.size());
    let mut list: Vec<Elem> = Vec::new();
    let push = |x: Elem, members: &mut Subset, list: &mut Vec<Elem>| {
        if members.insert(x) {
            list.push(x);
        }
    };
    push(a.top(), &mut members, &mut list);
    for &s in seeds {
        push(s, &mut members, &mut list);
    }
    let mut done = 0;
    while done < list.len() {
        let x = list[done];
        done += 1;
        push(a.neg(x), &mut members, &mut list);
        for i in 0..done {
            let y = list[i];
            for z in [
                a.meet(x, y),
                a.join(x, y),
                a.imp(x, y),
                a.imp(y, x),
            ] {
                push(z, &mut members, &mut list);
            }
        }
    }
    members
}

/// Restricts the operations to a closed subset, re-indexed in ascending
/// order of the original indices.
pub fn restrict(a: &NelsonAlgebra, members: &Subset) -> (NelsonAlgebra, Homomorphism) {
    let carrier = members.to_vec();
    let index: HashMap<Elem, Elem> = carrier.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let at = |x: Elem| index[&x];
    let tables = Tables::from_fns(
        carrier.len(),
        at(a.top()),
        |i| at(a.neg(carrier[i])),
        |i, j| at(a.meet(carrier[i], carrier[j])),
        |i, j| at(a.join(carrier[i], carrier[j])),
        |i, j| at(a.imp(carrier[i], carrier[j])),
    )
    .expect("closed subset yields well-formed tables");
    let sub = NelsonAlgebra::trusted(tables);
    let inclusion = Homomorphism {
        source: sub.clone(),
        target: a.clone(),
        map: carrier,
    };
    (sub, inclusion)
}

/// The subalgebra generated by `seeds`, with its inclusion map.
pub fn generated_subalgebra(a: &NelsonAlgebra, seeds: &[Elem]) -> Result<(NelsonAlgebra, Homomorphism)> {
    if let Some(&s) = seeds.iter().find(|&&s| s >= a.size()) {
        return Err(Error::InvalidArgument(format!("seed {s} outside carrier")));
    }
    Ok(restrict(a, &subalgebra_closure(a, seeds)))
}

/// A map between carriers. Construction does not check preservation; see
/// [`Homomorphism::is_homomorphism`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: NelsonAlgebra,
    pub target: NelsonAlgebra,
    pub map: Vec<Elem>,
}

impl Homomorphism {
    pub fn new(source: NelsonAlgebra, target: NelsonAlgebra, map: Vec<Elem>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::InvalidArgument(format!(
                "map has {} entries, source has {} elements",
                map.len(),
                source.size()
            )));
        }
        if let Some(i) = map.iter().position(|&v| v >= target.size()) {
            return Err(Error::InvalidArgument(format!("map[{i}] outside target carrier")));
        }
        Ok(Homomorphism { source, target, map })
    }

    pub fn identity(a: &NelsonAlgebra) -> Self {
        Homomorphism {
            source: a.clone(),
            target: a.clone(),
            map: a.elements().collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    /// First element or pair at which an operation is not preserved.
    pub fn preservation_failure(&self) -> Option<String> {
        let (s, t, h) = (&self.source, &self.target, &self.map);
        if h[s.top()] != t.top() {
            return Some("top".into());
        }
        for x in s.elements() {
            if h[s.neg(x)] != t.neg(h[x]) {
                return Some(format!("neg at {x}"));
            }
            for y in s.elements() {
                if h[s.meet(x, y)] != t.meet(h[x], h[y]) {
                    return Some(format!("meet at ({x}, {y})"));
                }
                if h[s.join(x, y)] != t.join(h[x], h[y]) {
                    return Some(format!("join at ({x}, {y})"));
                }
                if h[s.imp(x, y)] != t.imp(h[x], h[y]) {
                    return Some(format!("imp at ({x}, {y})"));
                }
            }
        }
        None
    }

    pub fn is_homomorphism(&self) -> bool {
        self.preservation_failure().is_none()
    }

    /// Preimage of the target's top.
    pub fn kernel(&self) -> Subset {
        Subset::from_predicate(self.source.size(), |x| self.map[x] == self.target.top())
    }

    pub fn image(&self) -> Subset {
        Subset::from_indices(self.target.size(), self.map.iter().copied())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_full()
    }

    pub fn is_injective(&self) -> bool {
        self.image().count() == self.source.size()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.target != other.source {
            return Err(Error::InvalidArgument("composition of non-matching maps".into()));
        }
        Ok(Homomorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Option<Homomorphism> {
        if !(self.is_injective() && self.is_surjective()) {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(Homomorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            map: inv,
        })
    }
}

/// The homomorphism `A -> B` sending `gens_a[i]` to `gens_b[i]`, if one
/// exists and `gens_a` generates `A`. Computed by closing the graph
/// `{(g_a, g_b)}` inside `A × B`.
pub fn extend_generators(
    a: &NelsonAlgebra,
    gens_a: &[Elem],
    b: &NelsonAlgebra,
    gens_b: &[Elem],
) -> Option<Homomorphism> {
    assert_eq!(gens_a.len(), gens_b.len());
    let mut map: Vec<Option<Elem>> = vec![None; a.size()];
    let mut list: Vec<(Elem, Elem)> = Vec::new();
    let push = |p: (Elem, Elem), map: &mut Vec<Option<Elem>>, list: &mut Vec<(Elem, Elem)>| -> bool {
        match map[p.0] {
            Some(v) => v == p.1,
            None => {
                map[p.0] = Some(p.1);
                list.push(p);
                true
            }
        }
    };
    let mut ok = push((a.top(), b.top()), &mut map, &mut list);
    for (&x, &y) in gens_a.iter().zip(gens_b) {
        ok &= push((x, y), &mut map, &mut list);
    }
    let mut done = 0;
    while ok && done < list.len() {
        let (x, u) = list[done];
        done += 1;
        ok &= push((a.neg(x), b.neg(u)), &mut map, &mut list);
        for i in 0..done {
            let (y, v) = list[i];
            ok &= push((a.meet(x, y), b.meet(u, v)), &mut map, &mut list);
            ok &= push((a.join(x, y), b.join(u, v)), &mut map, &mut list);
            ok &= push((a.imp(x, y), b.imp(u, v)), &mut map, &mut list);
            ok &= push((a.imp(y, x), b.imp(v, u)), &mut map, &mut list);
            if !ok {
                break;
            }
        }
    }
    if !ok {
        return None;
    }
    let map: Option<Vec<Elem>> = map.into_iter().collect();
    map.map(|map| Homomorphism {
        source: a.clone(),
        target: b.clone(),
        map,
    })
}

/// An isomorphism `A -> B` found by backtracking search, if one exists.
pub fn find_isomorphism(a: &NelsonAlgebra, b: &NelsonAlgebra) -> Option<Homomorphism> {
    let n = a.size();
    if n != b.size() {
        return None;
    }
    // cheap invariant: number of elements below each element
    let below = |t: &Tables, x: Elem| t.elements().filter(|&y| t.leq(y, x)).count();
    let sig_a: Vec<(usize, bool)> = a.elements().map(|x| (below(a, x), a.neg(x) == x)).collect();
    let sig_b: Vec<(usize, bool)> = b.elements().map(|x| (below(b, x), b.neg(x) == x)).collect();
    let mut map: Vec<Option<Elem>> = vec![None; n];
    let mut used = vec![false; n];

    fn consistent(a: &Tables, b: &Tables, map: &[Option<Elem>], x: Elem) -> bool {
        let u = map[x].expect("assigned");
        let check = |p: Elem, q: Elem| map[p].is_none_or(|v| v == q);
        if !check(a.neg(x), b.neg(u)) {
            return false;
        }
        for y in 0..map.len() {
            if let Some(v) = map[y] {
                if !(check(a.meet(x, y), b.meet(u, v))
                    && check(a.join(x, y), b.join(u, v))
                    && check(a.imp(x, y), b.imp(u, v))
                    && check(a.imp(y, x), b.imp(v, u)))
                {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        a: &Tables,
        b: &Tables,
        sig_a: &[(usize, bool)],
        sig_b: &[(usize, bool)],
        map: &mut Vec<Option<Elem>>,
        used: &mut Vec<bool>,
        x: Elem,
    ) -> bool {
        if x == map.len() {
            return true;
        }
        for u in 0..map.len() {
            if used[u] || sig_a[x] != sig_b[u] {
                continue;
            }
            map[x] = Some(u);
            used[u] = true;
            let ok = (0..=x).all(|y| consistent(a, b, map, y));
            if ok && search(a, b, sig_a, sig_b, map, used, x + 1) {
                return true;
            }
            map[x] = None;
            used[u] = false;
        }
        false
    }

    if !search(a, b, &sig_a, &sig_b, &mut map, &mut used, 0) {
        return None;
    }
    let map: Vec<Elem> = map.into_iter().map(|m| m.expect("complete")).collect();
    let h = Homomorphism {
        source: a.clone(),
        target: b.clone(),
        map,
    };
    h.is_homomorphism().then_some(h)
}

/// For `2 <= |A| <= 5`, the chain `C_|A|` or `C2 x C2` that `A` is
/// isomorphic to, with the isomorphism.
pub fn small_size_class(a: &NelsonAlgebra) -> Option<(String, Homomorphism)> {
    let n = a.size();
    if !(2..=5).contains(&n) {
        return None;
    }
    let chain = make_chain(n).expect("n >= 2");
    if let Some(h) = find_isomorphism(a, &chain) {
        return Some((format!("C{n}"), h));
    }
    if n == 4 {
        let c2 = make_chain(2).expect("C2");
        let square = product(&[&c2, &c2]).expect("non-empty");
        if let Some(h) = find_isomorphism(a, &square) {
            return Some(("C2xC2".to_string(), h));
        }
    }
    None
}
