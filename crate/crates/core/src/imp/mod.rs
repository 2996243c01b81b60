//! The core imperative language: syntax, parsing, rendering and labels.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod render;
pub mod sort;

use std::collections::HashMap;
use std::fmt;

pub use ast::{ArithOp, CmpOp, Expr, Label, LabeledNode, LabeledProgram, LabeledStmt, Stmt};
pub use render::{render, render_expr};
pub use parser::is_keyword;
pub use sort::Sort;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for SyntaxError {}

/// Parses and sort-checks a statement without labelling it.
pub fn parse_fragment(text: &str) -> Result<Stmt, SyntaxError> {
    parse_sorted(text).map(|(s, _)| s)
}

/// Like [`parse_fragment`], also returning the inferred variable sorts.
pub fn parse_sorted(text: &str) -> Result<(Stmt, HashMap<String, Sort>), SyntaxError> {
    let (raw, pos) = parser::parse_raw(text)?;
    let sorted = sort::resolve(raw, &pos)?;
    Ok((sorted.stmt, sorted.vars))
}

/// Parses a whole program and labels it.
pub fn parse_program(text: &str) -> Result<LabeledProgram, SyntaxError> {
    parse_fragment(text).map(LabeledProgram::new)
}

/// Parses a single expression.
pub fn parse_expr(text: &str) -> Result<Expr, SyntaxError> {
    match parse_fragment(&format!("zz:={text}"))? {
        Stmt::Assign { rhs, .. } => Ok(rhs),
        _ => Err(SyntaxError { line: 1, column: 1, message: "not an expression".into(), expected: Vec::new() }),
    }
}

/// JSON view of a labelled program.
pub fn ast_json(p: &LabeledProgram) -> serde_json::Value {
    serde_json::json!({
        "schema": 1,
        "entry": p.entry,
        "exit": p.exit,
        "ast": serde_json::to_value(&p.tree).expect("labelled trees serialise"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_motivating_program() {
        let src = r#"str = "x=5"; while (i < 3) { str = str + "5"; i = i + 1; } str = str + ";"; eval(str);"#;
        let p = parse_program(src).unwrap();
        let text = render(&p.root);
        assert_eq!(text, r#"str:="x=5";while(i<3){str:=str+"5";i:=i+1};str:=str+";";eval(str);"#);
    }

    #[test]
    fn loop_program_labels() {
        let p = parse_program("x := 0; while (x<5) {x := x + 1}; x:=7").unwrap();
        assert_eq!(p.labels(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!((p.entry, p.exit), (1, 6));
    }

    #[test]
    fn skip_labels() {
        let p = parse_program("skip").unwrap();
        assert_eq!((p.entry, p.exit), (1, 2));
    }

    #[test]
    fn reports_position_of_missing_operand() {
        let e = parse_program("x := 5 +").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        assert!(e.expected.iter().any(|x| x == "integer"));
    }

    #[test]
    fn rejects_sort_mismatch() {
        assert!(parse_program("x := 1; x := \"a\"").is_err());
        assert!(parse_program("eval(3)").is_err());
    }

    #[test]
    fn plus_defaults_to_addition() {
        let s = parse_fragment("x := y + z").unwrap();
        assert!(matches!(s, Stmt::Assign { rhs: Expr::Arith { .. }, .. }));
    }

    #[test]
    fn else_keyword_is_optional() {
        let a = parse_fragment("if(x<5){x:=1}else{x:=2}").unwrap();
        let b = parse_fragment("if(x<5){x:=1}{x:=2}").unwrap();
        assert_eq!(a, b);
    }
}
