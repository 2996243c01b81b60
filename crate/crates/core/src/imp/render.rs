use super::ast::{ArithOp, Expr, Stmt};

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::And { .. } => 1,
        Expr::Cmp { .. } => 2,
        Expr::Arith { op: ArithOp::Mul, .. } => 4,
        Expr::Arith { .. } => 3,
        Expr::Concat { left, right } if stringy(left) || stringy(right) => 3,
        Expr::Not { .. } => 5,
        Expr::Int { value } if *value < 0 => 5,
        _ => 6,
    }
}

/// Expressions whose rendering alone fixes the string sort.
fn stringy(e: &Expr) -> bool {
    matches!(e, Expr::Str { .. } | Expr::Substr { .. } | Expr::Concat { .. })
}

fn wrap(e: &Expr, parens: bool) -> String {
    if parens {
        format!("({})", render_expr(e))
    } else {
        render_expr(e)
    }
}

fn binary(p: u8, left: &Expr, sym: &str, right: &Expr, assoc: bool) -> String {
    let lp = if assoc { prec(left) < p } else { prec(left) <= p };
    format!("{}{}{}", wrap(left, lp), sym, wrap(right, prec(right) <= p))
}

pub fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Int { value } => value.to_string(),
        Expr::Str { value } => format!("\"{value}\""),
        Expr::Bool { value } => value.to_string(),
        Expr::Var { name } => name.clone(),
        Expr::Arith { op, left, right } => binary(prec(e), left, op.symbol(), right, true),
        Expr::Cmp { op, left, right } => binary(2, left, op.symbol(), right, false),
        Expr::And { left, right } => binary(1, left, "&&", right, true),
        Expr::Not { inner } => format!("!{}", wrap(inner, prec(inner) < 5)),
        Expr::Concat { left, right } => {
            if stringy(left) || stringy(right) {
                binary(3, left, "+", right, true)
            } else {
                format!("concat({},{})", render_expr(left), render_expr(right))
            }
        }
        Expr::Substr { subject, from, to } => {
            format!("substr({},{},{})", render_expr(subject), render_expr(from), render_expr(to))
        }
    }
}

fn flatten<'a>(s: &'a Stmt, out: &mut Vec<&'a Stmt>) {
    match s {
        Stmt::Seq { first, second } => {
            flatten(first, out);
            flatten(second, out);
        }
        other => out.push(other),
    }
}

fn block(s: &Stmt) -> String {
    let mut parts = Vec::new();
    flatten(s, &mut parts);
    let body: Vec<String> = parts.into_iter().map(single).collect();
    format!("{{{}}}", body.join(";"))
}

fn single(s: &Stmt) -> String {
    match s {
        Stmt::Skip => "skip".into(),
        Stmt::Assign { target, rhs } => format!("{target}:={}", render_expr(rhs)),
        Stmt::Seq { .. } => block(s),
        Stmt::If { cond, then_branch, else_branch } => {
            format!("if({}){}{}", render_expr(cond), block(then_branch), block(else_branch))
        }
        Stmt::While { cond, body } => format!("while({}){}", render_expr(cond), block(body)),
        Stmt::Eval { arg } => format!("eval({})", render_expr(arg)),
    }
}

/// Renders a statement in the canonical concrete syntax: every top-level
/// statement ends with `;`, blocks carry no trailing separator.
pub fn render(s: &Stmt) -> String {
    let mut parts = Vec::new();
    flatten(s, &mut parts);
    parts.into_iter().map(|p| format!("{};", single(p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imp::ast::CmpOp;

    #[test]
    fn renders_simple_forms() {
        assert_eq!(render(&Stmt::assign("x", Expr::int(5))), "x:=5;");
        assert_eq!(render(&Stmt::Skip), "skip;");
        let s = Stmt::if_(
            Expr::cmp(CmpOp::Lt, Expr::var("x"), Expr::int(5)),
            Stmt::assign("x", Expr::int(1)),
            Stmt::assign("x", Expr::int(2)),
        );
        assert_eq!(render(&s), "if(x<5){x:=1}{x:=2};");
    }

    #[test]
    fn parenthesises_by_precedence() {
        let e = Expr::arith(
            ArithOp::Mul,
            Expr::arith(ArithOp::Add, Expr::var("a"), Expr::int(1)),
            Expr::arith(ArithOp::Sub, Expr::var("b"), Expr::int(-2)),
        );
        assert_eq!(render_expr(&e), "(a+1)*(b--2)");
    }

    #[test]
    fn concat_of_variables_uses_call_form() {
        let e = Expr::concat(Expr::var("s"), Expr::var("t"));
        assert_eq!(render_expr(&e), "concat(s,t)");
        let e = Expr::concat(Expr::var("s"), Expr::str("5"));
        assert_eq!(render_expr(&e), "s+\"5\"");
    }
}
