//! graph6 codec (the standard ASCII interchange encoding).
//!
//! Supports the short form (n < 63) and the 3-byte extended form
//! (63 <= n <= 258047). Edge bits cover the upper triangle column by column:
//! (0,1), (0,2), (1,2), (0,3), ...

use super::Graph;
use crate::error::GraphError;

const BIAS: u8 = 63;

pub fn parse(bytes: &[u8]) -> Result<Graph, GraphError> {
    let bytes = trim(bytes);
    if bytes.is_empty() {
        return Err(GraphError::Graph6Truncated {
            expected: 1,
            got: 0,
        });
    }
    let (n, mut pos) = parse_order(bytes)?;
    let pairs = n * (n - 1) / 2;
    let data_len = pairs.div_ceil(6);
    if bytes.len() - pos < data_len {
        return Err(GraphError::Graph6Truncated {
            expected: data_len,
            got: bytes.len() - pos,
        });
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if bit % 6 == 0 {
                cur = decode_byte(bytes, pos)?;
                pos += 1;
            }
            if cur & (1 << (5 - bit % 6)) != 0 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    // trailing padding bits must be zero per the format, but decoders are
    // conventionally lenient; remaining input bytes must be valid though
    while pos < bytes.len() {
        decode_byte(bytes, pos)?;
        pos += 1;
    }
    Graph::new(n, edges, None)
}

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + BIAS);
    } else {
        assert!(n <= 258047, "graph6 encoding supports n <= 258047");
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + BIAS);
        out.push(((n >> 6) & 63) as u8 + BIAS);
        out.push((n & 63) as u8 + BIAS);
    }
    let mut cur = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            cur <<= 1;
            if g.has_edge(i, j) {
                cur |= 1;
            }
            nbits += 1;
            if nbits == 6 {
                out.push(cur + BIAS);
                cur = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((cur << (6 - nbits)) + BIAS);
    }
    String::from_utf8(out).unwrap()
}

fn parse_order(bytes: &[u8]) -> Result<(usize, usize), GraphError> {
    if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            // 8-byte huge form, deliberately unsupported
            return Err(GraphError::Graph6SizeUnsupported(u64::MAX));
        }
        if bytes.len() < 4 {
            return Err(GraphError::Graph6Truncated {
                expected: 4,
                got: bytes.len(),
            });
        }
        let mut n = 0usize;
        for off in 1..4 {
            n = (n << 6) | decode_byte(bytes, off)? as usize;
        }
        Ok((n, 4))
    } else {
        let n = decode_byte(bytes, 0)? as usize;
        if n >= 63 {
            return Err(GraphError::Graph6SizeUnsupported(n as u64));
        }
        Ok((n, 1))
    }
}

fn decode_byte(bytes: &[u8], offset: usize) -> Result<u8, GraphError> {
    let b = bytes[offset];
    if !(BIAS..=126).contains(&b) {
        return Err(GraphError::MalformedGraph6 { offset, byte: b });
    }
    Ok(b - BIAS)
}

fn trim(bytes: &[u8]) -> &[u8] {
    let mut b = bytes;
    if b.starts_with(b">>graph6<<") {
        b = &b[10..];
    }
    while let Some((&last, rest)) = b.split_last() {
        if last == b'\n' || last == b'\r' {
            b = rest;
        } else {
            break;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        // hand-encoded per the format definition
        let k3 = parse(b"Bw").unwrap();
        assert_eq!(k3.n(), 3);
        assert_eq!(k3.edges(), &[(0, 1), (0, 2), (1, 2)]);

        let single = parse(b"@").unwrap();
        assert_eq!(single.n(), 1);
        assert_eq!(single.num_edges(), 0);

        let p3 = parse(b"Bg").unwrap();
        assert_eq!(p3.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn encode_matches_hand_values() {
        assert_eq!(encode(&Graph::complete(3)), "Bw");
        assert_eq!(encode(&Graph::path(3)), "Bg");
        assert_eq!(encode(&Graph::new(1, vec![], None).unwrap()), "@");
    }

    #[test]
    fn malformed_byte_reports_offset() {
        let err = parse(b"B\x1f").unwrap_err();
        assert_eq!(
            err,
            GraphError::MalformedGraph6 {
                offset: 1,
                byte: 0x1f
            }
        );
    }

    #[test]
    fn truncated_input() {
        assert!(matches!(
            parse(b"D"),
            Err(GraphError::Graph6Truncated { .. })
        ));
    }

    #[test]
    fn extended_form_round_trip() {
        let g = Graph::random(100, 0.05, 7).unwrap();
        let enc = encode(&g);
        assert_eq!(enc.as_bytes()[0], 126);
        assert_eq!(parse(enc.as_bytes()).unwrap(), g);
    }

    #[test]
    fn header_and_newline_tolerated() {
        assert_eq!(parse(b">>graph6<<Bw\n").unwrap(), Graph::complete(3));
    }
}
