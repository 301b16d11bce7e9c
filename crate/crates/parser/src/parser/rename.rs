//! Renaming of variable letters introduced by a quantifier rewrite.
//!
//! When the backend reuses a letter that an enclosing quantifier already
//! binds, the rewrite contains old occurrences (the outer variable) and new
//! ones (the replaced noun phrase) spelled the same. Aligning the rewrite
//! with its input by longest common word subsequence separates them: an
//! occurrence that aligns with the same letter in the input is old, any
//! other one is new.

fn core(word: &str) -> &str {
    word.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Replaces the occurrences of `letter` in `rewrite` that do not come from
/// `input` with `fresh`.
pub fn rename_introduced(input: &str, rewrite: &str, letter: &str, fresh: &str) -> String {
    let a: Vec<&str> = input.split_whitespace().collect();
    let b: Vec<&str> = rewrite.split_whitespace().collect();
    let eq = |i: usize, j: usize| core(a[i]).eq_ignore_ascii_case(core(b[j]));

    // lcs[i][j] = LCS length of a[i..] and b[j..]
    let mut lcs = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in (0..a.len()).rev() {
        for j in (0..b.len()).rev() {
            lcs[i][j] = if eq(i, j) { lcs[i + 1][j + 1] + 1 } else { lcs[i + 1][j].max(lcs[i][j + 1]) };
        }
    }
    let mut aligned = vec![false; b.len()];
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if eq(i, j) {
            aligned[j] = true;
            i += 1;
            j += 1;
        } else if lcs[i + 1][j] >= lcs[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }

    b.iter()
        .enumerate()
        .map(|(j, w)| {
            if !aligned[j] && core(w) == letter {
                let start = w.find(letter).expect("core is a substring");
                format!("{}{fresh}{}", &w[..start], &w[start + letter.len()..])
            } else {
                w.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
