use std::fmt;
use std::str::FromStr;

use crate::corpus::Token;
use crate::error::{Error, Result};

/// Value of the additional input stream attached to each source token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    /// Regular source word.
    W,
    /// Source word covered by an annotation.
    S,
    /// Target-language annotation token.
    T,
}

impl Factor {
    pub fn as_str(self) -> &'static str {
        match self {
            Factor::W => "w",
            Factor::S => "s",
            Factor::T => "t",
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Factor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "w" => Ok(Factor::W),
            "s" => Ok(Factor::S),
            "t" => Ok(Factor::T),
            other => Err(format!("unknown factor {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredToken {
    pub token: Token,
    pub factor: Factor,
}

impl FactoredToken {
    pub fn new(token: Token, factor: Factor) -> Self {
        FactoredToken { token, factor }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactoredFormat {
    /// `token|f` items on one line.
    Inline,
    /// A token line plus a factor line of equal length.
    Parallel,
}

impl FromStr for FactoredFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inline" => Ok(FactoredFormat::Inline),
            "parallel" => Ok(FactoredFormat::Parallel),
            _ => Err(Error::InvalidInput(format!("unknown factored format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FactoredSentence {
    pub tokens: Vec<FactoredToken>,
}

const BAR_ESCAPE: &str = "&#124;";
const AMP_ESCAPE: &str = "&amp;";

fn escape(token: &str) -> String {
    if !token.contains(['|', '&']) {
        return token.to_owned();
    }
    token.replace('&', AMP_ESCAPE).replace('|', BAR_ESCAPE)
}

fn unescape(token: &str) -> String {
    if !token.contains('&') {
        return token.to_owned();
    }
    token.replace(BAR_ESCAPE, "|").replace(AMP_ESCAPE, "&")
}

impl FactoredSentence {
    pub fn new(tokens: Vec<FactoredToken>) -> Self {
        FactoredSentence { tokens }
    }

    /// Every token with factor `W`.
    pub fn plain(tokens: &[Token]) -> Self {
        FactoredSentence {
            tokens: tokens
                .iter()
                .map(|t| FactoredToken::new(t.clone(), Factor::W))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = Factor> + '_ {
        self.tokens.iter().map(|t| t.factor)
    }

    /// Source tokens with annotation tokens removed.
    pub fn strip(&self) -> Vec<Token> {
        self.tokens
            .iter()
            .filter(|t| t.factor != Factor::T)
            .map(|t| t.token.clone())
            .collect()
    }

    pub fn has_annotations(&self) -> bool {
        self.tokens.iter().any(|t| t.factor == Factor::T)
    }

    /// Checks the layout produced by annotation: every T-run directly
    /// follows an S-run and every S-run is directly followed by a T-run.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        let f: Vec<Factor> = self.factors().collect();
        for (k, &cur) in f.iter().enumerate() {
            let prev = k.checked_sub(1).map(|p| f[p]);
            let next = f.get(k + 1).copied();
            if cur == Factor::T && !matches!(prev, Some(Factor::S) | Some(Factor::T)) {
                return Err(format!("annotation at {k} does not follow a marked span"));
            }
            if cur == Factor::S && !matches!(next, Some(Factor::S) | Some(Factor::T)) {
                return Err(format!("marked span ending at {k} has no annotation"));
            }
        }
        Ok(())
    }

    /// `token|f` items joined by single spaces. `&` and `|` inside tokens are
    /// written as `&amp;` and `&#124;`.
    pub fn to_inline(&self) -> String {
        let mut out = String::new();
        for (k, t) in self.tokens.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            out.push_str(&escape(&t.token));
            out.push('|');
            out.push_str(t.factor.as_str());
        }
        out
    }

    /// (token line, factor line).
    pub fn to_parallel(&self) -> (String, String) {
        let tokens = self
            .tokens
            .iter()
            .map(|t| t.token.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        let factors = self.factors().map(Factor::as_str).collect::<Vec<_>>().join(" ");
        (tokens, factors)
    }

    pub fn parse_inline(line: &str) -> Result<Self> {
        let tokens = line
            .split_whitespace()
            .enumerate()
            .map(|(position, item)| {
                let (tok, factor) = item.rsplit_once('|').ok_or_else(|| Error::Factored {
                    position,
                    message: format!("missing factor separator in {item:?}"),
                })?;
                let factor = factor
                    .parse()
                    .map_err(|message| Error::Factored { position, message })?;
                let token = Token::new(unescape(tok)).map_err(|e| Error::Factored {
                    position,
                    message: e.to_string(),
                })?;
                Ok(FactoredToken::new(token, factor))
            })
            .collect::<Result<_>>()?;
        Ok(FactoredSentence { tokens })
    }

    pub fn parse_parallel(tokens: &str, factors: &str) -> Result<Self> {
        let toks: Vec<&str> = tokens.split_whitespace().collect();
        let facs: Vec<&str> = factors.split_whitespace().collect();
        if toks.len() != facs.len() {
            return Err(Error::Factored {
                position: toks.len().min(facs.len()),
                message: format!("{} tokens but {} factors", toks.len(), facs.len()),
            });
        }
        let tokens = toks
            .iter()
            .zip(&facs)
            .enumerate()
            .map(|(position, (t, f))| {
                let factor = f
                    .parse()
                    .map_err(|message| Error::Factored { position, message })?;
                Ok(FactoredToken::new(Token::new(*t)?, factor))
            })
            .collect::<Result<_>>()?;
        Ok(FactoredSentence { tokens })
    }
}

/// Serializes to one line (inline) or two lines (parallel: tokens, factors).
pub fn serialize_factored(fs: &FactoredSentence, format: FactoredFormat) -> Vec<String> {
    match format {
        FactoredFormat::Inline => vec![fs.to_inline()],
        FactoredFormat::Parallel => {
            let (t, f) = fs.to_parallel();
            vec![t, f]
        }
    }
}

pub fn parse_factored<S: AsRef<str>>(lines: &[S], format: FactoredFormat) -> Result<FactoredSentence> {
    match (format, lines) {
        (FactoredFormat::Inline, [line]) => FactoredSentence::parse_inline(line.as_ref()),
        (FactoredFormat::Parallel, [tokens, factors]) => {
            FactoredSentence::parse_parallel(tokens.as_ref(), factors.as_ref())
        }
        _ => Err(Error::InvalidInput(format!(
            "wrong number of lines ({}) for {format:?} factored input",
            lines.len()
        ))),
    }
}

/// Copies each token's factor onto its subword units. `segmentation[k]` are
/// the units of token `k`; removing `join_marker` from the end of each unit
/// and concatenating must give back the token.
pub fn propagate_factors_to_subwords(
    fs: &FactoredSentence,
    segmentation: &[Vec<String>],
    join_marker: &str,
) -> Result<FactoredSentence> {
    if segmentation.len() != fs.len() {
        return Err(Error::InvalidInput(format!(
            "segmentation covers {} tokens but sentence has {}",
            segmentation.len(),
            fs.len()
        )));
    }
    let mut tokens = Vec::with_capacity(segmentation.iter().map(Vec::len).sum());
    for (position, (tok, units)) in fs.tokens.iter().zip(segmentation).enumerate() {
        let joined: String = units
            .iter()
            .map(|u| u.strip_suffix(join_marker).filter(|_| !join_marker.is_empty()).unwrap_or(u))
            .collect();
        if units.is_empty() || joined != tok.token.as_str() {
            return Err(Error::Factored {
                position,
                message: format!("units {units:?} do not spell {:?}", tok.token.as_str()),
            });
        }
        for unit in units {
            tokens.push(FactoredToken::new(Token::new(unit.as_str())?, tok.factor));
        }
    }
    Ok(FactoredSentence { tokens })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ft(s: &str, f: Factor) -> FactoredToken {
        FactoredToken::new(Token::new(s).unwrap(), f)
    }

    fn engine_sentence() -> FactoredSentence {
        use Factor::*;
        FactoredSentence::new(vec![
            ft("faulty", W),
            ft("engine", S),
            ft("dzinējs", T),
            ft("or", W),
            ft("in", W),
            ft("transmission", S),
            ft("transmisija", T),
        ])
    }

    #[test]
    fn inline_rendering() {
        assert_eq!(
            engine_sentence().to_inline(),
            "faulty|w engine|s dzinējs|t or|w in|w transmission|s transmisija|t"
        );
    }

    #[test]
    fn parallel_rendering() {
        let (t, f) = engine_sentence().to_parallel();
        assert_eq!(t, "faulty engine dzinējs or in transmission transmisija");
        assert_eq!(f, "w s t w w s t");
    }

    #[test]
    fn roundtrips() {
        let fs = engine_sentence();
        for format in [FactoredFormat::Inline, FactoredFormat::Parallel] {
            let lines = serialize_factored(&fs, format);
            assert_eq!(parse_factored(&lines, format).unwrap(), fs);
        }
    }

    #[test]
    fn bar_is_escaped() {
        let fs = FactoredSentence::new(vec![ft("a|b", Factor::W)]);
        assert_eq!(fs.to_inline(), "a&#124;b|w");
        assert_eq!(FactoredSentence::parse_inline("a&#124;b|w").unwrap(), fs);
        let fs = FactoredSentence::new(vec![ft("&#124;|", Factor::S)]);
        assert_eq!(FactoredSentence::parse_inline(&fs.to_inline()).unwrap(), fs);
    }

    #[test]
    fn parse_errors() {
        let err = FactoredSentence::parse_inline("a|w x|q").unwrap_err();
        assert!(err.to_string().contains("unknown factor q"), "{err}");
        assert!(matches!(err, Error::Factored { position: 1, .. }));
        assert!(FactoredSentence::parse_inline("a|w b").is_err());
        assert!(FactoredSentence::parse_inline("|w").is_err());
        assert!(FactoredSentence::parse_parallel("a b c", "w w").is_err());
    }

    #[test]
    fn structure_check() {
        assert!(engine_sentence().check_structure().is_ok());
        let bad = FactoredSentence::parse_inline("a|w b|t").unwrap();
        assert!(bad.check_structure().is_err());
        let bad = FactoredSentence::parse_inline("a|s b|w").unwrap();
        assert!(bad.check_structure().is_err());
    }

    #[test]
    fn subword_broadcast() {
        let fs = FactoredSentence::parse_inline("faulty|w engine|s dzinējs|t").unwrap();
        let seg = vec![
            vec!["faulty".to_owned()],
            vec!["eng@@".to_owned(), "ine".to_owned()],
            vec!["dzin@@".to_owned(), "ējs".to_owned()],
        ];
        let out = propagate_factors_to_subwords(&fs, &seg, "@@").unwrap();
        assert_eq!(out.to_inline(), "faulty|w eng@@|s ine|s dzin@@|t ējs|t");
        assert_eq!(out.len(), 5);

        let single: Vec<Vec<String>> = fs.tokens.iter().map(|t| vec![t.token.to_string()]).collect();
        assert_eq!(propagate_factors_to_subwords(&fs, &single, "@@").unwrap(), fs);

        assert!(propagate_factors_to_subwords(&fs, &seg[..2], "@@").is_err());
        let wrong = vec![seg[0].clone(), vec!["eng@@".into(), "ime".into()], seg[2].clone()];
        assert!(propagate_factors_to_subwords(&fs, &wrong, "@@").is_err());
    }
}
