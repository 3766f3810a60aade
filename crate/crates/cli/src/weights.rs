use bispec_core::adcond::WeightVector;
use bispec_core::exact::{ParamScalar, Rat};
use bispec_core::expr::{parse_scalar, ParseContext};
use bispec_core::Error;

/// Reads `j:w,...` pairs (each `w` an expression) or a label such as
/// `A7-14A5+49A3-36A1` with rational coefficients.
pub fn parse_weights(text: &str, ctx: &ParseContext) -> Result<WeightVector, Error> {
    let text = text.trim();
    if text.contains(':') {
        let mut pairs = Vec::new();
        for part in text.split(',') {
            let (j, w) = part
                .split_once(':')
                .ok_or_else(|| Error::Invalid(format!("weight `{part}` is not of the form j:w")))?;
            let j = j
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Invalid(format!("bad order `{j}`")))?;
            pairs.push((j, parse_scalar(w, ctx)?));
        }
        return WeightVector::new(pairs);
    }
    parse_label(text)
}

fn parse_label(text: &str) -> Result<WeightVector, Error> {
    let bad = || {
        Error::Invalid(format!(
            "cannot read weights `{text}`; use j:w pairs or a label like A3-16A1"
        ))
    };
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pairs = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (negative, body) = match rest.as_bytes()[0] {
            b'-' => (true, &rest[1..]),
            b'+' => (false, &rest[1..]),
            _ if pairs.is_empty() => (false, rest),
            _ => return Err(bad()),
        };
        let a = body.find('A').ok_or_else(bad)?;
        let coeff = body[..a].trim_end_matches('*');
        let digits = body[a + 1..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(bad());
        }
        let j: usize = body[a + 1..a + 1 + digits].parse().map_err(|_| bad())?;
        let mut w = if coeff.is_empty() {
            Rat::one()
        } else {
            coeff.parse::<Rat>().map_err(|_| bad())?
        };
        if negative {
            w = -w;
        }
        pairs.push((j, ParamScalar::from_rat(w)));
        rest = &body[a + 1 + digits..];
    }
    WeightVector::new(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_forms_agree() {
        let ctx = ParseContext::default();
        let a = parse_weights("A7-14A5+49A3-36A1", &ctx).unwrap();
        let b = parse_weights("7:1, 5:-14, 3:49, 1:-36", &ctx).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.label(), "A7-14A5+49A3-36A1");
        assert_eq!(
            parse_weights("A2 - 1/2*A0", &ctx).unwrap().weight(0),
            ParamScalar::from_rat(Rat::new(-1, 2))
        );
    }

    #[test]
    fn symbolic_pairs_and_errors() {
        let ctx = ParseContext::new(["a"]).unwrap();
        let w = parse_weights("3:1,1:-4*a^2", &ctx).unwrap();
        assert_eq!(w.to_string(), "A3 - 4*a^2*A1");
        assert!(parse_weights("B3", &ctx).is_err());
        assert!(parse_weights("A3-", &ctx).is_err());
        assert!(parse_weights("3:1,1:-4*b", &ctx).is_err());
    }
}
