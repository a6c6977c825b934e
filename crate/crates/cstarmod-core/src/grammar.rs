//! Parsers for the CLI spec strings: algebra descriptors are handled by
//! `AlgebraDescriptor::from_str`; this module adds module specs and
//! generator tokens.
//!
//! Module grammar:
//!   `free(M2+M3, rank=4)`  `tensor(dim=3, M2)`  `ideal(M2, gen=e11)`
//!   `dsum(free(M2,1), ideal(M2,gen=e11))`
//!
//! Generator tokens: `e11` (matrix unit of the first block), `b2:e13`
//! (block-qualified), `unit`, `b2:unit`, `zero`.

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::{CoreError, Result};
use crate::module::ModuleSpace;

/// Split a comma-separated argument list at the top parenthesis level.
fn split_args(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !parts.is_empty() {
        parts.push(last);
    }
    parts
}

fn head_and_body(s: &str) -> Result<(&str, &str)> {
    let open = s
        .find('(')
        .ok_or_else(|| CoreError::Parse(format!("expected `head(...)`, got `{s}`")))?;
    if !s.ends_with(')') {
        return Err(CoreError::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    Ok((s[..open].trim(), &s[open + 1..s.len() - 1]))
}

/// Parse a generator token into an algebra element.
pub fn parse_generator(algebra: &AlgebraDescriptor, token: &str) -> Result<AlgElement> {
    let token = token.trim();
    if token == "zero" {
        return Ok(algebra.zero());
    }
    let (block, rest) = match token.split_once(':') {
        Some((b, rest)) => {
            let idx: usize = b
                .strip_prefix('b')
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| CoreError::Parse(format!("bad block qualifier in `{token}`")))?;
            if idx == 0 {
                return Err(CoreError::Parse("block qualifiers are 1-based".into()));
            }
            (idx - 1, rest)
        }
        None => (0, token),
    };
    if rest == "unit" {
        return algebra.block_unit(block);
    }
    let digits = rest
        .strip_prefix('e')
        .ok_or_else(|| CoreError::Parse(format!("bad generator token `{token}`")))?;
    let chars: Vec<char> = digits.chars().collect();
    if chars.len() != 2 || !chars[0].is_ascii_digit() || !chars[1].is_ascii_digit() {
        return Err(CoreError::Parse(format!(
            "matrix-unit token must be `e<i><j>` with single digits, got `{token}`"
        )));
    }
    let i = chars[0].to_digit(10).unwrap() as usize;
    let j = chars[1].to_digit(10).unwrap() as usize;
    if i == 0 || j == 0 {
        return Err(CoreError::Parse("matrix-unit indices are 1-based".into()));
    }
    algebra.matrix_unit(block, i - 1, j - 1)
}

/// Parse a module spec string.
pub fn parse_module_spec(s: &str) -> Result<ModuleSpace> {
    let s = s.trim();
    let (head, body) = head_and_body(s)?;
    match head {
        "free" => {
            let args = split_args(body);
            if args.len() != 2 {
                return Err(CoreError::Parse(format!(
                    "free needs (algebra, rank), got `{s}`"
                )));
            }
            let algebra: AlgebraDescriptor = args[0].parse()?;
            let rank_str = args[1].strip_prefix("rank=").unwrap_or(args[1]).trim();
            let rank: usize = rank_str
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad rank `{}`", args[1])))?;
            ModuleSpace::free(algebra, rank)
        }
        "tensor" => {
            let args = split_args(body);
            if args.len() != 2 {
                return Err(CoreError::Parse(format!(
                    "tensor needs (dim=<d>, algebra), got `{s}`"
                )));
            }
            let dim_str = args[0].strip_prefix("dim=").unwrap_or(args[0]).trim();
            let dim: usize = dim_str
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad dimension `{}`", args[0])))?;
            let algebra: AlgebraDescriptor = args[1].parse()?;
            ModuleSpace::tensor(algebra, dim)
        }
        "ideal" => {
            let args = split_args(body);
            if args.len() != 2 {
                return Err(CoreError::Parse(format!(
                    "ideal needs (algebra, gen=<token>), got `{s}`"
                )));
            }
            let algebra: AlgebraDescriptor = args[0].parse()?;
            let token = args[1]
                .strip_prefix("gen=")
                .ok_or_else(|| CoreError::Parse(format!("ideal needs `gen=`, got `{}`", args[1])))?
                .trim();
            let generator = parse_generator(&algebra, token)?;
            ModuleSpace::ideal(algebra, generator, token)
        }
        "dsum" => {
            let args = split_args(body);
            if args.is_empty() {
                return Err(CoreError::Parse("dsum needs at least one part".into()));
            }
            let parts: Vec<ModuleSpace> =
                args.iter().map(|a| parse_module_spec(a)).collect::<Result<_>>()?;
            ModuleSpace::direct_sum(parts)
        }
        other => Err(CoreError::Parse(format!("unknown module kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_examples() {
        let free = parse_module_spec("free(M2+M3, rank=4)").unwrap();
        assert_eq!(free.rank(), 4);
        assert_eq!(free.complex_dim(), 4 * 13);

        let tensor = parse_module_spec("tensor(dim=3, M2)").unwrap();
        assert_eq!(tensor.complex_dim(), 12);

        let ideal = parse_module_spec("ideal(M2, gen=e11)").unwrap();
        assert_eq!(ideal.complex_dim(), 2);

        let ds = parse_module_spec("dsum(free(M2,1), ideal(M2,gen=e11))").unwrap();
        assert_eq!(ds.complex_dim(), 4 + 2);
        assert_eq!(ds.spec_string(), "dsum(free(M2, rank=1), ideal(M2, gen=e11))");
    }

    #[test]
    fn spec_string_roundtrips() {
        for spec in [
            "free(M2+C, rank=2)",
            "tensor(dim=2, M3)",
            "ideal(M2, gen=e12)",
        ] {
            let space = parse_module_spec(spec).unwrap();
            let again = parse_module_spec(space.spec_string()).unwrap();
            assert_eq!(space.spec_string(), again.spec_string());
        }
    }

    #[test]
    fn generator_tokens() {
        let a: AlgebraDescriptor = "M2+M3".parse().unwrap();
        let e11 = parse_generator(&a, "e11").unwrap();
        assert_eq!(e11, a.matrix_unit(0, 0, 0).unwrap());
        let b2 = parse_generator(&a, "b2:e13").unwrap();
        assert_eq!(b2, a.matrix_unit(1, 0, 2).unwrap());
        let u = parse_generator(&a, "b1:unit").unwrap();
        assert_eq!(u, a.block_unit(0).unwrap());
        assert_eq!(parse_generator(&a, "zero").unwrap(), a.zero());
        assert!(parse_generator(&a, "e99").is_err());
        assert!(parse_generator(&a, "q11").is_err());
        assert!(parse_generator(&a, "b0:e11").is_err());
    }

    #[test]
    fn bad_specs_are_usage_errors() {
        for bad in [
            "free(M2)",
            "free(M2, rank=0)",
            "tensor(M2, dim=2, extra)",
            "ideal(M2, e11)",
            "nonsense(M2)",
            "free(M2, rank=2",
        ] {
            assert!(parse_module_spec(bad).is_err(), "`{bad}` should fail");
        }
    }
}
