use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AstError {
    #[error("a condition needs at least one predicate")]
    EmptyCondition,
    #[error("duplicate predicate {0} in condition")]
    DuplicatePredicate(String),
    #[error("empty path literal")]
    EmptyPath,
    #[error("concat nesting depth {depth} exceeds the limit of {max}")]
    TooDeep { depth: usize, max: usize },
}

/// Predicate names, in the fixed order used for deterministic output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateTag {
    DuplicateMainFork,
    DuplicateMainOutside,
    DuplicateForkOutside,
    MainSpecific,
    ForkSpecific,
    Dependency,
    Rename,
    FrequentPattern,
}

impl PredicateTag {
    pub const ALL: [PredicateTag; 8] = [
        PredicateTag::DuplicateMainFork,
        PredicateTag::DuplicateMainOutside,
        PredicateTag::DuplicateForkOutside,
        PredicateTag::MainSpecific,
        PredicateTag::ForkSpecific,
        PredicateTag::Dependency,
        PredicateTag::Rename,
        PredicateTag::FrequentPattern,
    ];

    /// Tags whose predicate takes no literal.
    pub const PLAIN: [PredicateTag; 7] = [
        PredicateTag::DuplicateMainFork,
        PredicateTag::DuplicateMainOutside,
        PredicateTag::DuplicateForkOutside,
        PredicateTag::MainSpecific,
        PredicateTag::ForkSpecific,
        PredicateTag::Dependency,
        PredicateTag::Rename,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PredicateTag::DuplicateMainFork => "DuplicateMainFork",
            PredicateTag::DuplicateMainOutside => "DuplicateMainOutside",
            PredicateTag::DuplicateForkOutside => "DuplicateForkOutside",
            PredicateTag::MainSpecific => "MainSpecific",
            PredicateTag::ForkSpecific => "ForkSpecific",
            PredicateTag::Dependency => "Dependency",
            PredicateTag::Rename => "Rename",
            PredicateTag::FrequentPattern => "FrequentPattern",
        }
    }

    pub fn from_name(name: &str) -> Option<PredicateTag> {
        PredicateTag::ALL.into_iter().find(|t| t.name() == name)
    }
}

impl fmt::Display for PredicateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    DuplicateMainFork,
    DuplicateMainOutside,
    DuplicateForkOutside,
    MainSpecific,
    ForkSpecific,
    Dependency,
    Rename,
    FrequentPattern(String),
}

impl Predicate {
    pub fn tag(&self) -> PredicateTag {
        match self {
            Predicate::DuplicateMainFork => PredicateTag::DuplicateMainFork,
            Predicate::DuplicateMainOutside => PredicateTag::DuplicateMainOutside,
            Predicate::DuplicateForkOutside => PredicateTag::DuplicateForkOutside,
            Predicate::MainSpecific => PredicateTag::MainSpecific,
            Predicate::ForkSpecific => PredicateTag::ForkSpecific,
            Predicate::Dependency => PredicateTag::Dependency,
            Predicate::Rename => PredicateTag::Rename,
            Predicate::FrequentPattern(_) => PredicateTag::FrequentPattern,
        }
    }

    /// The literal-free predicate for a tag; `None` for `FrequentPattern`.
    pub fn plain(tag: PredicateTag) -> Option<Predicate> {
        Some(match tag {
            PredicateTag::DuplicateMainFork => Predicate::DuplicateMainFork,
            PredicateTag::DuplicateMainOutside => Predicate::DuplicateMainOutside,
            PredicateTag::DuplicateForkOutside => Predicate::DuplicateForkOutside,
            PredicateTag::MainSpecific => Predicate::MainSpecific,
            PredicateTag::ForkSpecific => Predicate::ForkSpecific,
            PredicateTag::Dependency => Predicate::Dependency,
            PredicateTag::Rename => Predicate::Rename,
            PredicateTag::FrequentPattern => return None,
        })
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            Predicate::FrequentPattern(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::FrequentPattern(path) => write!(f, "FrequentPattern(x, {path:?})"),
            other => write!(f, "{}(x)", other.tag()),
        }
    }
}

/// A non-empty conjunction of distinct predicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition {
    predicates: Vec<Predicate>,
}

impl Condition {
    pub fn new(predicates: Vec<Predicate>) -> Result<Condition, AstError> {
        if predicates.is_empty() {
            return Err(AstError::EmptyCondition);
        }
        for (i, p) in predicates.iter().enumerate() {
            if p.path().is_some_and(str::is_empty) {
                return Err(AstError::EmptyPath);
            }
            if predicates[..i].contains(p) {
                return Err(AstError::DuplicatePredicate(p.to_string()));
            }
        }
        Ok(Condition { predicates })
    }

    pub fn single(predicate: Predicate) -> Condition {
        Condition {
            predicates: vec![predicate],
        }
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn contains(&self, p: &Predicate) -> bool {
        self.predicates.contains(p)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (last, init) = self.predicates.split_last().expect("non-empty");
        for p in init {
            write!(f, "And({p}, ")?;
        }
        write!(f, "{last}")?;
        for _ in init {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selection {
    Main,
    Fork,
    MainByIndex(usize),
    ForkByIndex(usize),
    MainByPath(String),
    ForkByPath(String),
    Pattern(PredicateTag),
}

impl Selection {
    pub fn is_whole_branch(&self) -> bool {
        matches!(self, Selection::Main | Selection::Fork)
    }

    pub fn is_index(&self) -> bool {
        matches!(self, Selection::MainByIndex(_) | Selection::ForkByIndex(_))
    }

    pub fn tag_name(&self) -> &'static str {
        match self {
            Selection::Main => "Main",
            Selection::Fork => "Fork",
            Selection::MainByIndex(_) => "MainByIndex",
            Selection::ForkByIndex(_) => "ForkByIndex",
            Selection::MainByPath(_) => "MainByPath",
            Selection::ForkByPath(_) => "ForkByPath",
            Selection::Pattern(_) => "Pattern",
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::Main | Selection::Fork => write!(f, "{}(x)", self.tag_name()),
            Selection::MainByIndex(k) | Selection::ForkByIndex(k) => {
                write!(f, "{}(x, {k})", self.tag_name())
            }
            Selection::MainByPath(p) | Selection::ForkByPath(p) => {
                write!(f, "{}(x, {p:?})", self.tag_name())
            }
            Selection::Pattern(key) => write!(f, "Pattern(x, {:?})", key.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transformation {
    Concat(Box<Transformation>, Box<Transformation>),
    Remove(Selection, Selection),
    Select(Selection),
}

impl Transformation {
    pub fn concat(left: Transformation, right: Transformation) -> Transformation {
        Transformation::Concat(Box::new(left), Box::new(right))
    }

    /// Number of nested `Concat` levels; zero for a leaf.
    pub fn concat_depth(&self) -> usize {
        match self {
            Transformation::Concat(l, r) => 1 + l.concat_depth().max(r.concat_depth()),
            _ => 0,
        }
    }

    /// All selections in left-to-right order.
    pub fn selections(&self) -> Vec<&Selection> {
        let mut out = Vec::new();
        self.collect_selections(&mut out);
        out
    }

    fn collect_selections<'a>(&'a self, out: &mut Vec<&'a Selection>) {
        match self {
            Transformation::Concat(l, r) => {
                l.collect_selections(out);
                r.collect_selections(out);
            }
            Transformation::Remove(a, b) => {
                out.push(a);
                out.push(b);
            }
            Transformation::Select(s) => out.push(s),
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transformation::Concat(l, r) => write!(f, "Concat({l}, {r})"),
            Transformation::Remove(a, b) => write!(f, "Remove({a}, {b})"),
            Transformation::Select(s) => write!(f, "{s}"),
        }
    }
}

/// `Apply(condition, transformation)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Program {
    pub condition: Condition,
    pub transformation: Transformation,
}

impl Program {
    pub fn new(condition: Condition, transformation: Transformation) -> Program {
        Program {
            condition,
            transformation,
        }
    }

    pub fn check_depth(&self, max: usize) -> Result<(), AstError> {
        let depth = self.transformation.concat_depth();
        if depth > max {
            return Err(AstError::TooDeep { depth, max });
        }
        Ok(())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Apply({}, {})", self.condition, self.transformation)
    }
}
