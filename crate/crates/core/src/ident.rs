//! Identifier normalization for relation, constant and variable names.
//!
//! Relation names are the CamelCase of the extracted lexeme (`"very tired"`
//! becomes `VeryTired`), constants additionally lose a leading article
//! (`"a book"` becomes `Book`), and variables are lowercase letters as
//! introduced by the quantifier step (`x`, `y`, `z`, or `x1` after renaming).

const ARTICLES: [&str; 3] = ["a", "an", "the"];

fn words(lexeme: &str) -> Vec<String> {
    lexeme
        .split(|c: char| c.is_whitespace() || c == '-' || c == '_')
        .map(|w| w.chars().filter(|c| c.is_alphanumeric()).collect::<String>())
        .filter(|w| !w.is_empty())
        .collect()
}

fn camel(words: &[String]) -> String {
    let mut out = String::new();
    for w in words {
        let mut chars = w.chars();
        if let Some(first) = chars.next() {
            out.extend(first.to_uppercase());
            out.push_str(chars.as_str());
        }
    }
    out
}

/// CamelCase relation name. Empty when the lexeme has no word characters.
pub fn relation_name(lexeme: &str) -> String {
    camel(&words(lexeme))
}

/// CamelCase constant name with a leading article removed.
pub fn constant_name(lexeme: &str) -> String {
    let mut ws = words(lexeme);
    if ws.len() > 1 && ARTICLES.contains(&ws[0].to_lowercase().as_str()) {
        ws.remove(0);
    }
    camel(&ws)
}

/// True for the variable letters the quantifier step introduces, with an
/// optional numeric suffix from alpha-renaming: `x`, `y`, `z`, `x1`, `y12`.
pub fn is_variable_token(token: &str) -> bool {
    let mut chars = token.chars();
    matches!(chars.next(), Some('x' | 'y' | 'z')) && chars.all(|c| c.is_ascii_digit())
}

/// True for a single lowercase ASCII letter followed by optional digits.
pub fn is_variable_name(token: &str) -> bool {
    let mut chars = token.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_digit())
}

/// Smallest `base<n>` (n ≥ 1) for which `taken` is false.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    (1..).map(|n| format!("{stem}{n}")).find(|candidate| !taken(candidate)).expect("unbounded search")
}
