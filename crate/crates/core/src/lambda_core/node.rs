use std::cmp::Ordering;

use super::LambdaError;

/// A node of the tree: a finite sequence of naturals. The root is empty.
///
/// The derived `Ord` on `Vec<u32>` is the lexicographic order: a proper
/// prefix precedes its extensions, otherwise the first disagreement decides.
pub type Node = Vec<u32>;

pub fn lex_compare(a: &[u32], b: &[u32]) -> Ordering {
    a.cmp(b)
}

pub fn is_prefix(prefix: &[u32], node: &[u32]) -> bool {
    node.len() >= prefix.len() && node[..prefix.len()] == *prefix
}

pub fn parent(node: &[u32]) -> Option<&[u32]> {
    node.split_last().map(|(_, rest)| rest)
}

/// Dot-joined decimal key; the root is `""`.
pub fn node_key(node: &[u32]) -> String {
    let parts: Vec<String> = node.iter().map(u32::to_string).collect();
    parts.join(".")
}

pub fn parse_node_key(key: &str) -> Result<Node, LambdaError> {
    if key.is_empty() {
        return Ok(Vec::new());
    }
    key.split('.')
        .map(|part| {
            let canonical =
                !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit()) && (part == "0" || !part.starts_with('0'));
            if !canonical {
                return Err(LambdaError::InvalidNodeKey(key.to_string()));
            }
            part.parse::<u32>().map_err(|_| LambdaError::InvalidNodeKey(key.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_clauses() {
        assert_eq!(lex_compare(&[1], &[1, 0]), Ordering::Less);
        assert_eq!(lex_compare(&[1, 5], &[2]), Ordering::Less);
        assert_eq!(lex_compare(&[], &[0]), Ordering::Less);
        assert_eq!(lex_compare(&[3, 1], &[3, 1]), Ordering::Equal);
    }

    #[test]
    fn keys_round_trip() {
        for node in [vec![], vec![0], vec![12, 0, 7]] {
            assert_eq!(parse_node_key(&node_key(&node)).unwrap(), node);
        }
        for bad in [".", "1.", "01", "a", "1..2", "-1", "99999999999"] {
            assert!(parse_node_key(bad).is_err(), "{bad}");
        }
    }
}
