//! Mapping from source identifiers to target-language symbols.

use std::collections::HashSet;

use indexmap::IndexMap;

use super::DeclarationSet;
use crate::ident::fresh_name;

/// Name of the single uninterpreted sort.
pub const UNIVERSE_SORT: &str = "Object";

/// Reserved words and core-theory symbols that user identifiers must avoid.
const SMT_RESERVED: &[&str] = &[
    "_",
    "!",
    "as",
    "let",
    "exists",
    "forall",
    "match",
    "par",
    "BINARY",
    "DECIMAL",
    "HEXADECIMAL",
    "NUMERAL",
    "STRING",
    "true",
    "false",
    "not",
    "and",
    "or",
    "xor",
    "=>",
    "=",
    "distinct",
    "ite",
    "Bool",
    UNIVERSE_SORT,
];

pub(crate) fn is_reserved(name: &str) -> bool {
    SMT_RESERVED.contains(&name)
}

/// Restricts `name` to `[A-Za-z0-9_]`: whitespace becomes `_`, anything
/// else is dropped. A leading digit gets an `s_` prefix.
pub fn sanitize(name: &str) -> String {
    let mut out: String = name
        .trim()
        .chars()
        .filter_map(|c| match c {
            c if c.is_ascii_alphanumeric() || c == '_' => Some(c),
            c if c.is_whitespace() => Some('_'),
            _ => None,
        })
        .collect();
    if out.is_empty() {
        out.push_str("sym");
    }
    if out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert_str(0, "s_");
    }
    out
}

/// Emitted names for the global symbols (constants and relations share one
/// namespace) plus the renames that were needed.
#[derive(Debug, Clone, Default)]
pub(crate) struct SymbolTable {
    constants: IndexMap<String, String>,
    relations: IndexMap<String, String>,
    taken: HashSet<String>,
    pub renames: IndexMap<String, String>,
}

impl SymbolTable {
    /// Names that are already legal claim themselves first, constants before
    /// relations; everything else is sanitized and suffixed on collision.
    pub fn for_smt(decls: &DeclarationSet) -> Self {
        let mut table = SymbolTable::default();
        let symbols: Vec<(bool, &String)> =
            decls.constants.iter().map(|c| (true, c)).chain(decls.relations.keys().map(|r| (false, r))).collect();

        let mut deferred = Vec::new();
        for &(is_const, name) in &symbols {
            if sanitize(name) == *name && !is_reserved(name) && !table.taken.contains(name) {
                table.assign(is_const, name, name.clone());
            } else {
                deferred.push((is_const, name));
            }
        }
        for (is_const, name) in deferred {
            let base = sanitize(name);
            let emitted = if !is_reserved(&base) && !table.taken.contains(&base) {
                base
            } else {
                fresh_name(&base, |c| is_reserved(c) || table.taken.contains(c))
            };
            table.renames.insert(name.clone(), emitted.clone());
            table.assign(is_const, name, emitted);
        }
        table
    }

    /// Identity mapping, used for the human-readable target.
    pub fn verbatim(decls: &DeclarationSet) -> Self {
        let mut table = SymbolTable::default();
        for c in &decls.constants {
            table.assign(true, c, c.clone());
        }
        for r in decls.relations.keys() {
            table.assign(false, r, r.clone());
        }
        table
    }

    fn assign(&mut self, is_const: bool, source: &str, emitted: String) {
        self.taken.insert(emitted.clone());
        let map = if is_const { &mut self.constants } else { &mut self.relations };
        map.insert(source.to_string(), emitted);
    }

    pub fn constant(&self, name: &str) -> Option<&str> {
        self.constants.get(name).map(String::as_str)
    }

    pub fn relation(&self, name: &str) -> Option<&str> {
        self.relations.get(name).map(String::as_str)
    }

    pub fn is_global(&self, emitted: &str) -> bool {
        self.taken.contains(emitted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanitize_rules() {
        assert_eq!(sanitize("Student"), "Student");
        assert_eq!(sanitize("very tired"), "very_tired");
        assert_eq!(sanitize("O'Brien"), "OBrien");
        assert_eq!(sanitize("3rd"), "s_3rd");
        assert_eq!(sanitize("→"), "sym");
    }

    #[test]
    fn collisions_get_numeric_suffixes() {
        let mut d = DeclarationSet::default();
        d.constants.insert("a b".into());
        d.constants.insert("a_b".into());
        d.constants.insert("not".into());
        d.relations.insert("Object".into(), 1);
        let t = SymbolTable::for_smt(&d);
        assert_eq!(t.constant("a_b"), Some("a_b"));
        assert_eq!(t.constant("a b"), Some("a_b1"));
        assert_eq!(t.constant("not"), Some("not1"));
        assert_eq!(t.relation("Object"), Some("Object1"));
        assert_eq!(t.renames.len(), 3);
    }

    #[test]
    fn relation_and_constant_with_same_name() {
        let mut d = DeclarationSet::default();
        d.constants.insert("Book".into());
        d.relations.insert("Book".into(), 1);
        let t = SymbolTable::for_smt(&d);
        assert_eq!(t.constant("Book"), Some("Book"));
        assert_eq!(t.relation("Book"), Some("Book1"));
    }
}
