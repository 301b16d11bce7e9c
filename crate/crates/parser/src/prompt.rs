//! Versioned system prompts for each parser step.
//!
//! The texts live in `prompts/v1/` and end with an `{input sentence}` slot.

use crate::schema::SchemaId;

pub const PROMPT_VERSION: &str = "v1";
const SLOT: &str = "{input sentence}";

pub fn template(schema: SchemaId) -> &'static str {
    match schema {
        SchemaId::Selector => include_str!("../prompts/v1/selector.txt"),
        SchemaId::Quantified => include_str!("../prompts/v1/quantified.txt"),
        SchemaId::LogicalBinary => include_str!("../prompts/v1/logical_binary.txt"),
        SchemaId::LogicalUnary => include_str!("../prompts/v1/logical_unary.txt"),
        SchemaId::AtomicKind => include_str!("../prompts/v1/atomic_kind.txt"),
        SchemaId::AtomicAdjective => include_str!("../prompts/v1/atomic_adjective.txt"),
        SchemaId::AtomicIntransitive => include_str!("../prompts/v1/atomic_intransitive.txt"),
        SchemaId::AtomicTransitive => include_str!("../prompts/v1/atomic_transitive.txt"),
        SchemaId::AtomicDitransitive => include_str!("../prompts/v1/atomic_ditransitive.txt"),
    }
}

/// The prompt with the sentence filled into its input slot.
pub fn render(schema: SchemaId, sentence: &str) -> String {
    template(schema).replace(SLOT, sentence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_prompt_has_one_slot() {
        for id in SchemaId::ALL {
            assert_eq!(template(id).matches(SLOT).count(), 1, "{id}");
        }
    }

    #[test]
    fn render_fills_slot() {
        let p = render(SchemaId::Selector, "Alice sings.");
        assert!(p.contains("Input: Alice sings.\n"));
        assert!(!p.contains(SLOT));
    }
}
