//! Parsing of numeric flag values such as `pi/4`, `3pi/2`, `-0.25` or `1/sqrt2`.
//!
//! Grammar:
//!
//! ```text
//! expr    := product
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+')? factor+          // juxtaposition multiplies: 3pi
//! factor  := number | 'pi' | 'sqrt' factor | '(' expr ')'
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

pub fn parse_real(input: &str) -> Result<f64, String> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(format!("empty number `{input}`"));
    }
    let v = p
        .product()
        .map_err(|e| format!("cannot parse `{input}`: {e}"))?;
    p.skip_ws();
    if !p.at_end() {
        return Err(format!(
            "cannot parse `{input}`: unexpected `{}`",
            &input[p.pos..]
        ));
    }
    if !v.is_finite() {
        return Err(format!("`{input}` is not finite"));
    }
    Ok(v)
}

/// `re` or `re,im`.
pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    match input.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(Complex64::new(parse_real(input)?, 0.0)),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, word: &str) -> bool {
        if self.src[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc *= self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d == 0.0 {
                        return Err("division by zero".into());
                    }
                    acc /= d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<f64, String> {
        self.skip_ws();
        let sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1.0
            }
            Some(b'+') => {
                self.pos += 1;
                1.0
            }
            _ => 1.0,
        };
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == b'.' || c == b'(' || c == b'p' || c == b's' {
                acc *= self.factor()?;
            } else {
                break;
            }
        }
        Ok(sign * acc)
    }

    fn factor(&mut self) -> Result<f64, String> {
        self.skip_ws();
        if self.eat("pi") {
            return Ok(PI);
        }
        if self.eat("sqrt") {
            let v = self.factor()?;
            if v < 0.0 {
                return Err("square root of a negative number".into());
            }
            return Ok(v.sqrt());
        }
        if self.eat("(") {
            let v = self.product()?;
            self.skip_ws();
            if !self.eat(")") {
                return Err("missing `)`".into());
            }
            return Ok(v);
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            let exponent_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.src[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exponent_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => format!("unexpected `{}`", c as char),
                None => "unexpected end of input".into(),
            });
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>()
            .map_err(|_| format!("bad number `{text}`"))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    use super::*;

    #[test]
    fn pi_rationals_are_exact() {
        assert_eq!(parse_real("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_real("pi/2").unwrap(), FRAC_PI_2);
        assert_eq!(parse_real("3pi/2").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("2*pi/3").unwrap(), 2.0 * PI / 3.0);
    }

    #[test]
    fn decimals_and_roots() {
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert_eq!(parse_real("-1e-3").unwrap(), -1e-3);
        assert_eq!(parse_real("1/sqrt2").unwrap(), 1.0 / 2f64.sqrt());
        assert!((parse_real("1/sqrt(2)").unwrap() - FRAC_1_SQRT_2).abs() <= 2e-16);
        assert_eq!(parse_real("1/2").unwrap(), 0.5);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "pie", "1/0", "sqrt(-1)", "(1", "abc", "1 2 x"] {
            assert!(parse_real(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_pairs() {
        assert_eq!(parse_complex("0,1/2").unwrap(), Complex64::new(0.0, 0.5));
        assert_eq!(parse_complex("-1/2").unwrap(), Complex64::new(-0.5, 0.0));
    }
}
