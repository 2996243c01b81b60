use super::ast::{ArithOp, CmpOp, Expr, Stmt};
use super::lexer::{tokenize, Pos, Tok, Token};
use super::SyntaxError;

const KEYWORDS: &[&str] = &["skip", "if", "else", "while", "eval", "true", "false", "substr", "concat"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

const EXPR_START: &[&str] = &["integer", "string", "identifier", "true", "false", "`(`", "`!`", "`-`", "substr", "concat"];
const STMT_START: &[&str] = &["identifier", "skip", "if", "while", "eval"];

/// Parses a statement sequence. Returns the unsorted tree (every `+` is
/// arithmetic) and the start position of every statement in preorder.
pub(crate) fn parse_raw(src: &str) -> Result<(Stmt, Vec<Pos>), SyntaxError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, i: 0, stmt_pos: Vec::new() };
    let s = p.seq()?;
    if p.peek() != &Tok::Eof {
        let mut expected = vec!["`;`".to_string(), "end of input".to_string()];
        if p.prev_was_block() {
            expected.extend(STMT_START.iter().map(|s| s.to_string()));
        }
        return Err(p.unexpected(expected));
    }
    Ok((s, p.stmt_pos))
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    stmt_pos: Vec<Pos>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn prev_was_block(&self) -> bool {
        self.i > 0 && self.toks[self.i - 1].tok == Tok::RBrace
    }

    fn unexpected(&self, expected: Vec<String>) -> SyntaxError {
        let pos = self.pos();
        SyntaxError {
            line: pos.line,
            column: pos.column,
            message: format!("unexpected {}", self.peek()),
            expected,
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec![tok.to_string()]))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn starts_stmt(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !is_keyword(s) || matches!(s.as_str(), "skip" | "if" | "while" | "eval"))
    }

    fn seq(&mut self) -> Result<Stmt, SyntaxError> {
        let mut stmts = vec![self.stmt()?];
        loop {
            if *self.peek() == Tok::Semi {
                self.bump();
                if self.starts_stmt() {
                    stmts.push(self.stmt()?);
                    continue;
                }
                break;
            }
            if self.prev_was_block() && self.starts_stmt() {
                stmts.push(self.stmt()?);
                continue;
            }
            break;
        }
        let mut it = stmts.into_iter().rev();
        let mut acc = it.next().expect("at least one statement");
        for s in it {
            acc = Stmt::Seq { first: Box::new(s), second: Box::new(acc) };
        }
        Ok(acc)
    }

    fn block(&mut self) -> Result<Stmt, SyntaxError> {
        self.expect(Tok::LBrace)?;
        if !self.starts_stmt() {
            return Err(self.unexpected(STMT_START.iter().map(|s| s.to_string()).collect()));
        }
        let s = self.seq()?;
        if *self.peek() != Tok::RBrace {
            let mut expected = vec!["`;`".to_string(), "`}`".to_string()];
            if self.prev_was_block() {
                expected.extend(STMT_START.iter().map(|s| s.to_string()));
            }
            return Err(self.unexpected(expected));
        }
        self.bump();
        Ok(s)
    }

    fn stmt(&mut self) -> Result<Stmt, SyntaxError> {
        self.stmt_pos.push(self.pos());
        let name = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected(STMT_START.iter().map(|s| s.to_string()).collect())),
        };
        match name.as_str() {
            "skip" => {
                self.bump();
                Ok(Stmt::Skip)
            }
            "if" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let then_branch = self.block()?;
                if self.at_keyword("else") {
                    self.bump();
                }
                if *self.peek() != Tok::LBrace {
                    return Err(self.unexpected(vec!["else".into(), "`{`".into()]));
                }
                let else_branch = self.block()?;
                Ok(Stmt::if_(cond, then_branch, else_branch))
            }
            "while" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let body = self.block()?;
                Ok(Stmt::while_(cond, body))
            }
            "eval" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let arg = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Stmt::eval(arg))
            }
            kw if is_keyword(kw) => Err(self.unexpected(STMT_START.iter().map(|s| s.to_string()).collect())),
            _ => {
                self.bump();
                match self.peek() {
                    Tok::Assign | Tok::Eq => {
                        self.bump();
                    }
                    _ => return Err(self.unexpected(vec!["`:=`".into()])),
                }
                let rhs = self.expr()?;
                Ok(Stmt::assign(name, rhs))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.cmp()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            let r = self.cmp()?;
            e = Expr::and(e, r);
        }
        Ok(e)
    }

    fn cmp(&mut self) -> Result<Expr, SyntaxError> {
        let l = self.add()?;
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Lt => CmpOp::Lt,
            Tok::Gt => CmpOp::Gt,
            _ => return Ok(l),
        };
        self.bump();
        let r = self.add()?;
        Ok(Expr::cmp(op, l, r))
    }

    fn add(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.mul()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(e),
            };
            self.bump();
            let r = self.mul()?;
            e = Expr::arith(op, e, r);
        }
    }

    fn mul(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let r = self.unary()?;
            e = Expr::arith(ArithOp::Mul, e, r);
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Expr::not(self.unary()?))
            }
            Tok::Minus => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(n) => {
                        self.bump();
                        Ok(Expr::int(-n))
                    }
                    _ => Err(self.unexpected(vec!["integer".into()])),
                }
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        let expected = || EXPR_START.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::int(n))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::str(s))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" | "false" => {
                    self.bump();
                    Ok(Expr::bool(name == "true"))
                }
                "substr" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let s = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let a = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let b = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::substr(s, a, b))
                }
                "concat" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let a = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let b = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::concat(a, b))
                }
                kw if is_keyword(kw) => Err(self.unexpected(expected())),
                _ => {
                    self.bump();
                    Ok(Expr::var(name))
                }
            },
            _ => Err(self.unexpected(expected())),
        }
    }
}
