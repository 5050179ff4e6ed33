use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

struct Interner {
    ids: HashMap<Arc<str>, u32>,
    strs: Vec<Arc<str>>,
}

static INTERNER: LazyLock<RwLock<Interner>> = LazyLock::new(|| {
    RwLock::new(Interner {
        ids: HashMap::new(),
        strs: Vec::new(),
    })
});

fn intern(s: &str) -> u32 {
    if let Some(&id) = INTERNER.read().unwrap().ids.get(s) {
        return id;
    }
    let mut table = INTERNER.write().unwrap();
    if let Some(&id) = table.ids.get(s) {
        return id;
    }
    let id = table.strs.len() as u32;
    let text: Arc<str> = Arc::from(s);
    table.strs.push(text.clone());
    table.ids.insert(text, id);
    id
}

fn lookup(id: u32) -> Arc<str> {
    INTERNER.read().unwrap().strs[id as usize].clone()
}

/// True when `s` belongs to the identifier class `[A-Za-z_][A-Za-z0-9_']*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// An interned ambient name. Equality and hashing are constant time.
///
/// The order is interning order, which is deterministic for a fixed sequence
/// of inputs but not alphabetical.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(u32);

impl Name {
    pub fn new(s: &str) -> Name {
        debug_assert!(!s.is_empty());
        Name(intern(s))
    }

    pub fn as_str(self) -> Arc<str> {
        lookup(self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// An interned variable identifier. Bound variables inside processes are
/// de Bruijn indices; this type names free process variables and the
/// variables of logical formulas.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(u32);

impl Variable {
    pub fn new(s: &str) -> Variable {
        debug_assert!(!s.is_empty());
        Variable(intern(s))
    }

    pub fn as_str(self) -> Arc<str> {
        lookup(self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str())
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.as_str())
    }
}

/// Returns `base0`, `base1`, ... the first candidate not in `avoid`.
pub fn fresh_name(avoid: &BTreeSet<Name>, base: &str) -> Name {
    fresh_name_from(avoid, base, 0)
}

/// Like [`fresh_name`] but starts counting at `start`.
pub fn fresh_name_from(avoid: &BTreeSet<Name>, base: &str, start: u64) -> Name {
    let mut i = start;
    loop {
        let candidate = Name::new(&format!("{base}{i}"));
        if !avoid.contains(&candidate) {
            return candidate;
        }
        i += 1;
    }
}
