//! Name normalization for ranking-table lookups.

/// Trims, collapses internal whitespace runs to one space, and case-folds.
pub fn normalize(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for word in name.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn collapses_and_folds() {
        assert_eq!(
            normalize("  Indian   Institute of\tScience "),
            "indian institute of science"
        );
        assert_eq!(normalize("IIT\u{a0}Delhi"), "iit delhi");
        assert_eq!(normalize("   "), "");
    }

    proptest! {
        #[test]
        fn idempotent(s in "\\PC{0,40}") {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once);
        }
    }
}
