use super::{BinOp, Expr, Func};

fn add(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinOp::Add, a, b)
}

fn sub(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinOp::Sub, a, b)
}

fn mul(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinOp::Mul, a, b)
}

fn div(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinOp::Div, a, b)
}

fn pow(a: Expr, b: Expr) -> Expr {
    Expr::binary(BinOp::Pow, a, b)
}

pub(super) fn derivative(e: &Expr) -> Expr {
    simplify(&raw_derivative(e))
}

fn raw_derivative(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Const(_) => Expr::Num(0.0),
        Expr::Var => Expr::Num(1.0),
        Expr::Neg(u) => Expr::neg(raw_derivative(u)),
        Expr::Binary(op, u, v) => {
            let (u, v) = (u.as_ref(), v.as_ref());
            match op {
                BinOp::Add => add(raw_derivative(u), raw_derivative(v)),
                BinOp::Sub => sub(raw_derivative(u), raw_derivative(v)),
                BinOp::Mul => add(
                    mul(raw_derivative(u), v.clone()),
                    mul(u.clone(), raw_derivative(v)),
                ),
                BinOp::Div => div(
                    sub(
                        mul(raw_derivative(u), v.clone()),
                        mul(u.clone(), raw_derivative(v)),
                    ),
                    pow(v.clone(), Expr::Num(2.0)),
                ),
                BinOp::Pow if v.is_constant() => {
                    // d(u^c) = c u^(c-1) u'
                    mul(
                        mul(v.clone(), pow(u.clone(), sub(v.clone(), Expr::Num(1.0)))),
                        raw_derivative(u),
                    )
                }
                BinOp::Pow => {
                    // u^v = exp(v ln u)  =>  (u^v)' = u^v (v' ln u + v u'/u)
                    mul(
                        e.clone(),
                        add(
                            mul(raw_derivative(v), Expr::call(Func::Log, u.clone())),
                            div(mul(v.clone(), raw_derivative(u)), u.clone()),
                        ),
                    )
                }
            }
        }
        Expr::Call(f, u) => {
            let u = u.as_ref();
            let outer = match f {
                Func::Sin => Expr::call(Func::Cos, u.clone()),
                Func::Cos => Expr::neg(Expr::call(Func::Sin, u.clone())),
                Func::Exp => e.clone(),
                Func::Log => div(Expr::Num(1.0), u.clone()),
                Func::Sqrt => div(Expr::Num(1.0), mul(Expr::Num(2.0), e.clone())),
                Func::Abs => div(u.clone(), e.clone()),
            };
            mul(outer, raw_derivative(u))
        }
    }
}

fn fold(op: BinOp, a: f64, b: f64) -> Option<f64> {
    let v = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div if b != 0.0 => a / b,
        BinOp::Pow if a > 0.0 || (a == 0.0 && b > 0.0) || b.fract() == 0.0 => a.powf(b),
        _ => return None,
    };
    v.is_finite().then_some(v)
}

pub(super) fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Var | Expr::Const(_) => e.clone(),
        Expr::Neg(u) => match simplify(u) {
            Expr::Neg(inner) => *inner,
            Expr::Num(0.0) => Expr::Num(0.0),
            s => Expr::neg(s),
        },
        Expr::Call(f, u) => Expr::call(*f, simplify(u)),
        Expr::Binary(op, a, b) => {
            let a = simplify(a);
            let b = simplify(b);
            if let (Some(x), Some(y)) = (a.as_number(), b.as_number()) {
                if let Some(v) = fold(*op, x, y) {
                    return Expr::num(v);
                }
            }
            let is = |e: &Expr, v: f64| e.as_number() == Some(v);
            match op {
                BinOp::Add if is(&a, 0.0) => b,
                BinOp::Add | BinOp::Sub if is(&b, 0.0) => a,
                BinOp::Sub if is(&a, 0.0) => simplify(&Expr::neg(b)),
                BinOp::Mul if is(&a, 0.0) || is(&b, 0.0) => Expr::Num(0.0),
                BinOp::Mul if is(&a, 1.0) => b,
                BinOp::Mul | BinOp::Div if is(&b, 1.0) => a,
                BinOp::Div if is(&a, 0.0) => Expr::Num(0.0),
                BinOp::Pow if is(&b, 1.0) => a,
                BinOp::Pow if is(&b, 0.0) => Expr::Num(1.0),
                _ => Expr::binary(*op, a, b),
            }
        }
    }
}
