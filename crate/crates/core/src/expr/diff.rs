use super::{Expression, Var};

/// Exact derivative with respect to `var`, returned in canonical form.
pub fn differentiate(e: &Expression, var: Var) -> Expression {
    raw(e, var).canonical()
}

fn raw(e: &Expression, var: Var) -> Expression {
    match e {
        Expression::Const(_) => Expression::Const(0.0),
        Expression::Var(v) => Expression::Const(if *v == var { 1.0 } else { 0.0 }),
        Expression::Sum(children) => Expression::Sum(children.iter().map(|c| raw(c, var)).collect()),
        Expression::Product(children) => {
            let mut terms = Vec::with_capacity(children.len());
            for i in 0..children.len() {
                if !children[i].depends_on(var) {
                    continue;
                }
                let mut factors = children.clone();
                factors[i] = raw(&children[i], var);
                terms.push(Expression::Product(factors));
            }
            Expression::Sum(terms)
        }
        Expression::Pow(base, n) => match n {
            0 => Expression::Const(0.0),
            _ => Expression::Product(vec![
                Expression::Const(*n as f64),
                Expression::Pow(base.clone(), n - 1),
                raw(base, var),
            ]),
        },
        Expression::Exp { rate, var: v } if *v == var => Expression::Product(vec![Expression::Const(*rate), e.clone()]),
        Expression::Sin { freq, var: v } if *v == var => {
            Expression::Product(vec![Expression::Const(*freq), Expression::Cos { freq: *freq, var: *v }])
        }
        Expression::Cos { freq, var: v } if *v == var => Expression::Product(vec![
            Expression::Const(-*freq),
            Expression::Sin { freq: *freq, var: *v },
        ]),
        Expression::Exp { .. } | Expression::Sin { .. } | Expression::Cos { .. } => Expression::Const(0.0),
    }
}
