use alloc::vec::Vec;

/// Splits `s` on `sep` wherever the separator sits outside parentheses.
pub(crate) fn split_top_level<'a>(s: &'a str, sep: &str) -> Vec<&'a str> {
    let bytes = s.as_bytes();
    let sep_b = sep.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && bytes[i..].starts_with(sep_b) {
            out.push(s[start..i].trim());
            i += sep_b.len();
            start = i;
            continue;
        }
        i += 1;
    }
    out.push(s[start..].trim());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_parentheses() {
        assert_eq!(
            split_top_level("(1 + a1) * x1 + 2 * d1", " + "),
            ["(1 + a1) * x1", "2 * d1"]
        );
        assert_eq!(split_top_level("3", " + "), ["3"]);
    }
}
