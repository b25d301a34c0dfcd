//! Parser for `.gct` construction files.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::ast::*;
use crate::polycore::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    SyntaxError {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: undeclared {expected} `{name}`")]
    UndeclaredName {
        line: usize,
        col: usize,
        name: String,
        expected: &'static str,
    },
    #[error("{line}:{col}: `{keyword}` takes {expected}, got {got}")]
    ArityError {
        line: usize,
        col: usize,
        keyword: String,
        expected: String,
        got: usize,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::SyntaxError { line, col, .. }
            | ParseError::UndeclaredName { line, col, .. }
            | ParseError::ArityError { line, col, .. } => (*line, *col),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Point,
    Line,
    Segment,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Kind::Point => "point",
            Kind::Line => "line",
            Kind::Segment => "segment",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(BigInt),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError::SyntaxError {
        line,
        col,
        message: message.into(),
    }
}

/// Splits the source into statements, each a token list.
fn tokenize(src: &str) -> Result<Vec<Vec<Token>>, ParseError> {
    let mut stmts = Vec::new();
    let mut cur: Vec<Token> = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == ';' {
                if !cur.is_empty() {
                    stmts.push(std::mem::take(&mut cur));
                }
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let w: String = chars[start..i].iter().collect();
                cur.push(Token {
                    tok: Tok::Word(w),
                    line: li + 1,
                    col,
                });
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let w: String = chars[start..i].iter().collect();
                cur.push(Token {
                    tok: Tok::Int(w.parse().unwrap()),
                    line: li + 1,
                    col,
                });
                continue;
            }
            if "+-*/^()".contains(c) {
                cur.push(Token {
                    tok: Tok::Sym(c),
                    line: li + 1,
                    col,
                });
                i += 1;
                continue;
            }
            return Err(syntax(li + 1, col, format!("unexpected character `{c}`")));
        }
        if !cur.is_empty() {
            stmts.push(std::mem::take(&mut cur));
        }
    }
    Ok(stmts)
}

struct Ctx {
    names: BTreeMap<String, Kind>,
}

impl Ctx {
    fn declare(&mut self, t: &Token, kind: Kind) -> Result<String, ParseError> {
        let name = word(t)?;
        if self.names.contains_key(&name) {
            return Err(syntax(t.line, t.col, format!("`{name}` is already declared")));
        }
        self.names.insert(name.clone(), kind);
        Ok(name)
    }

    fn lookup(&self, t: &Token, kind: Kind) -> Result<String, ParseError> {
        let name = word(t)?;
        match self.names.get(&name) {
            Some(k) if *k == kind => Ok(name),
            _ => Err(ParseError::UndeclaredName {
                line: t.line,
                col: t.col,
                name,
                expected: kind.label(),
            }),
        }
    }
}

fn word(t: &Token) -> Result<String, ParseError> {
    match &t.tok {
        Tok::Word(w) => Ok(w.clone()),
        _ => Err(syntax(t.line, t.col, "expected a name")),
    }
}

fn arity(toks: &[Token], kw: &str, n: usize) -> Result<(), ParseError> {
    if toks.len() - 1 != n {
        return Err(ParseError::ArityError {
            line: toks[0].line,
            col: toks[0].col,
            keyword: kw.to_string(),
            expected: format!("{n} arguments"),
            got: toks.len() - 1,
        });
    }
    Ok(())
}

pub fn parse_construction(src: &str) -> Result<ConstructionProgram, ParseError> {
    let mut prog = ConstructionProgram::default();
    let mut ctx = Ctx {
        names: BTreeMap::new(),
    };
    for toks in tokenize(src)? {
        let head = &toks[0];
        let kw = match &head.tok {
            Tok::Word(w) => w.clone(),
            _ => return Err(syntax(head.line, head.col, "expected a keyword")),
        };
        let t = &toks;
        use Kind::*;
        let item = match kw.as_str() {
            "point" => {
                arity(t, &kw, 1)?;
                Item::Step(Step::FreePoint(ctx.declare(&t[1], Point)?))
            }
            "midpoint" | "segment" | "line" => {
                arity(t, &kw, 3)?;
                let p = ctx.lookup(&t[2], Point)?;
                let q = ctx.lookup(&t[3], Point)?;
                let kind = match kw.as_str() {
                    "midpoint" => Point,
                    "segment" => Segment,
                    _ => Line,
                };
                let name = ctx.declare(&t[1], kind)?;
                Item::Step(match kind {
                    Point => Step::Midpoint { name, p, q },
                    Segment => Step::Segment { name, p, q },
                    Line => Step::Line { name, p, q },
                })
            }
            "intersect" => {
                arity(t, &kw, 3)?;
                let l1 = ctx.lookup(&t[2], Line)?;
                let l2 = ctx.lookup(&t[3], Line)?;
                let name = ctx.declare(&t[1], Point)?;
                Item::Step(Step::Intersect { name, l1, l2 })
            }
            "perpfoot" => {
                arity(t, &kw, 3)?;
                let p = ctx.lookup(&t[2], Point)?;
                let line = ctx.lookup(&t[3], Line)?;
                let name = ctx.declare(&t[1], Point)?;
                Item::Step(Step::PerpFoot { name, p, line })
            }
            "circumcenter" | "incenter" => {
                arity(t, &kw, 4)?;
                let a = ctx.lookup(&t[2], Point)?;
                let b = ctx.lookup(&t[3], Point)?;
                let c = ctx.lookup(&t[4], Point)?;
                let name = ctx.declare(&t[1], Point)?;
                Item::Step(if kw == "circumcenter" {
                    Step::Circumcenter { name, a, b, c }
                } else {
                    Step::Incenter { name, a, b, c }
                })
            }
            "regular" => parse_regular(t, &mut ctx)?,
            "rightangle" => {
                arity(t, &kw, 3)?;
                Item::Constraint(Constraint::RightAngle(
                    ctx.lookup(&t[1], Point)?,
                    ctx.lookup(&t[2], Point)?,
                    ctx.lookup(&t[3], Point)?,
                ))
            }
            "equal" => {
                arity(t, &kw, 2)?;
                Item::Constraint(Constraint::Equal(
                    ctx.lookup(&t[1], Segment)?,
                    ctx.lookup(&t[2], Segment)?,
                ))
            }
            "samehalfplane" => {
                arity(t, &kw, 3)?;
                Item::Constraint(Constraint::SameHalfPlane(
                    ctx.lookup(&t[1], Point)?,
                    ctx.lookup(&t[2], Point)?,
                    ctx.lookup(&t[3], Line)?,
                ))
            }
            "compare" => {
                if prog.statement.is_some() {
                    return Err(syntax(head.line, head.col, "only one compare statement is allowed"));
                }
                prog.statement = Some(parse_statement(&t[1..], head, &ctx)?);
                continue;
            }
            _ => return Err(syntax(head.line, head.col, format!("unknown keyword `{kw}`"))),
        };
        prog.items.push(item);
    }
    Ok(prog)
}

fn parse_regular(t: &[Token], ctx: &mut Ctx) -> Result<Item, ParseError> {
    let last = t.last().unwrap();
    let n = match &last.tok {
        Tok::Int(n) if t.len() > 1 => n.clone(),
        _ => return Err(syntax(last.line, last.col, "`regular` ends with the vertex count")),
    };
    let n: u32 = match u32::try_from(n) {
        Ok(n) if (3..=6).contains(&n) => n,
        _ => {
            return Err(syntax(
                last.line,
                last.col,
                "regular polygons support 3, 4, 5 or 6 vertices",
            ))
        }
    };
    let names = &t[1..t.len() - 1];
    if names.len() < 3 || names.len() > n as usize {
        return Err(ParseError::ArityError {
            line: t[0].line,
            col: t[0].col,
            keyword: "regular".into(),
            expected: format!("between 3 and {n} vertex names"),
            got: names.len(),
        });
    }
    let mut out = vec![
        ctx.lookup(&names[0], Kind::Point)?,
        ctx.lookup(&names[1], Kind::Point)?,
    ];
    for tk in &names[2..] {
        out.push(ctx.declare(tk, Kind::Point)?);
    }
    Ok(Item::Step(Step::Regular { names: out, n }))
}

fn parse_statement(t: &[Token], head: &Token, ctx: &Ctx) -> Result<Statement, ParseError> {
    let split = t
        .iter()
        .position(|x| x.tok == Tok::Word("vs".into()))
        .ok_or_else(|| syntax(head.line, head.col, "expected `compare EXPR vs EXPR`"))?;
    let lhs = parse_expr(&t[..split], head, ctx)?;
    let rhs = parse_expr(&t[split + 1..], &t[split], ctx)?;
    Ok(Statement { lhs, rhs })
}

fn parse_expr(t: &[Token], before: &Token, ctx: &Ctx) -> Result<GeomExpr, ParseError> {
    let mut p = ExprParser { t, pos: 0, before, ctx };
    let e = p.sum()?;
    if p.pos < t.len() {
        let x = &t[p.pos];
        return Err(syntax(x.line, x.col, "unexpected token in expression"));
    }
    Ok(e)
}

struct ExprParser<'a> {
    t: &'a [Token],
    pos: usize,
    before: &'a Token,
    ctx: &'a Ctx,
}

impl ExprParser<'_> {
    fn peek_sym(&self) -> Option<char> {
        match self.t.get(self.pos).map(|x| &x.tok) {
            Some(Tok::Sym(c)) => Some(*c),
            _ => None,
        }
    }

    fn here(&self) -> (usize, usize) {
        match self.t.get(self.pos).or(self.t.last()) {
            Some(x) => (x.line, x.col),
            None => (self.before.line, self.before.col),
        }
    }

    fn sum(&mut self) -> Result<GeomExpr, ParseError> {
        let mut acc = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let r = self.product()?;
            acc = if c == '+' {
                GeomExpr::Add(Box::new(acc), Box::new(r))
            } else {
                GeomExpr::Sub(Box::new(acc), Box::new(r))
            };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<GeomExpr, ParseError> {
        let mut acc = self.power()?;
        while self.peek_sym() == Some('*') {
            self.pos += 1;
            acc = GeomExpr::Mul(Box::new(acc), Box::new(self.power()?));
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<GeomExpr, ParseError> {
        let base = self.atom()?;
        if self.peek_sym() == Some('^') {
            self.pos += 1;
            let (l, c) = self.here();
            match self.t.get(self.pos).map(|x| &x.tok) {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e = u32::try_from(n.clone())
                        .ok()
                        .filter(|e| *e >= 1)
                        .ok_or_else(|| syntax(l, c, "exponent must be a positive integer"))?;
                    return Ok(GeomExpr::Pow(Box::new(base), e));
                }
                _ => return Err(syntax(l, c, "expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GeomExpr, ParseError> {
        let (l, c) = self.here();
        let Some(tok) = self.t.get(self.pos) else {
            return Err(syntax(l, c, "expression ends unexpectedly"));
        };
        self.pos += 1;
        match &tok.tok {
            Tok::Sym('(') => {
                let e = self.sum()?;
                if self.peek_sym() != Some(')') {
                    let (l, c) = self.here();
                    return Err(syntax(l, c, "expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Int(n) => {
                let mut r = Rational::from_integer(n.clone());
                if self.peek_sym() == Some('/') {
                    self.pos += 1;
                    let (l, c) = self.here();
                    match self.t.get(self.pos).map(|x| &x.tok) {
                        Some(Tok::Int(d)) if d != &BigInt::from(0) => {
                            self.pos += 1;
                            r /= Rational::from_integer(d.clone());
                        }
                        _ => return Err(syntax(l, c, "expected a nonzero integer denominator")),
                    }
                }
                if r == Rational::from_integer(0.into()) {
                    return Err(syntax(tok.line, tok.col, "constants must be positive"));
                }
                Ok(GeomExpr::Const(r))
            }
            Tok::Word(_) => Ok(GeomExpr::Leaf(self.ctx.lookup(tok, Kind::Segment)?)),
            _ => Err(syntax(tok.line, tok.col, "unexpected token in expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottema_program() {
        let p = parse_construction(
            "point A; point B; point C; segment a B C; segment b A C; segment c A B; \
             compare (a+b+c)^2 vs a*b+b*c+c*a",
        )
        .unwrap();
        assert_eq!(p.free_points(), vec!["A", "B", "C"]);
        assert_eq!(p.steps().count(), 6);
        let st = p.statement.unwrap();
        assert_eq!(st.lhs.to_string(), "(a+b+c)^2");
        assert_eq!(st.rhs.to_string(), "a*b+b*c+c*a");
    }

    #[test]
    fn degenerate_midpoint_parses() {
        let p = parse_construction("point A; midpoint M A A").unwrap();
        assert_eq!(p.items.len(), 2);
    }

    #[test]
    fn diagnostics() {
        let e = parse_construction("point A\ncompare x vs y").unwrap_err();
        assert!(matches!(e, ParseError::UndeclaredName { ref name, .. } if name == "x"));
        assert_eq!(e.position(), (2, 9));
        let e = parse_construction("point A B").unwrap_err();
        assert!(matches!(e, ParseError::ArityError { .. }));
        let e = parse_construction("point A; frobnicate A").unwrap_err();
        assert!(matches!(e, ParseError::SyntaxError { line: 1, col: 10, .. }));
        let e = parse_construction("point A; point A").unwrap_err();
        assert!(matches!(e, ParseError::SyntaxError { .. }));
        let e = parse_construction("point A; point B; line l A B; segment s A l").unwrap_err();
        assert!(matches!(e, ParseError::UndeclaredName { expected: "point", .. }));
    }

    #[test]
    fn regular_and_comments() {
        let p = parse_construction(
            "# pentagon\npoint A\npoint B\nregular A B C D E 5 # chain\nsegment f A B\nsegment k A C\ncompare k vs 3/2*f",
        )
        .unwrap();
        assert!(matches!(p.steps().nth(2), Some(Step::Regular { n: 5, names }) if names.len() == 5));
        assert!(parse_construction("point A; point B; regular A B C 7").is_err());
        assert!(parse_construction("point A; point B; regular A B C D E 4").is_err());
    }
}
