#![allow(dead_code)]

pub mod oracle;

/// Fixed suite: `(F, [F_1, .., F_n])`. Covers multiple grid roots, multiple
/// fiber roots, vanishing leading coefficients and complex grid roots.
pub const SUITE: &[(&str, &[&str])] = &[
    ("Y^2 - X1", &["X1^2 - 2"]),
    ("Y^2 - X1", &["X1^3 - 2"]),
    ("Y^2 - X1", &["X1^2 + 1"]),
    ("(Y - X1)^2", &["(X1 - 1)^2"]),
    ("(X1^2 - 2)*Y^2 + Y - 1", &["X1^2 - 2"]),
    ("Y^3 - X1*Y + 1", &["X1^2 - X1 - 1"]),
    ("Y^2 - X1", &["X1^4 - 10*X1^2 + 1"]),
    ("Y^2 + X1", &["(X1^2 + 1)^2"]),
    ("X1*Y^3 + Y - X1", &["X1^3 - X1"]),
    ("(Y^2 - X1)^2", &["X1^2 - 3"]),
    ("Y^5 - X1", &["X1^4 + 1"]),
    ("(Y - X1)*(Y + X1)*(Y - 1)", &["X1^2 + X1 + 1"]),
    ("Y^2 - X1", &["X1 - 3"]),
    ("(X1 - 2)*Y^2 + (X1 + 2)*Y - 1", &["X1^2 - 4"]),
    ("Y^3 - 3*Y + X1 + 1", &["(X1 - 1)^3"]),
    ("Y - X1*X2", &["X1^2 - 2", "X2^2 - 3"]),
    ("Y^2 - X1 - X2", &["X1^2 - 2", "X2^2 - 3"]),
    ("Y^2 - X1*X2", &["X1^2 + 1", "X2^2 - 2"]),
    ("(Y - X2)^2", &["(X1 - 1)^2", "X2^2 + 1"]),
    ("Y^2 + X1*Y + X2", &["X1^3 - 2", "X2^2 - X2 - 1"]),
    ("(X1 - X2)*Y^2 + Y + 1", &["X1^2 - 2", "X2^2 - 2"]),
    ("(X1 - X2)*Y + X1 + X2", &["X1^2 - 2", "X2^2 - 2"]),
    ("(X1*X2 - 2)*Y + X1*X2 - 2", &["X1^2 - 1", "X2^2 - 4"]),
    ("Y^3 - X1*X2", &["(X1 + 1)^2*(X1 - 2)", "X2^2 - X2 + 1"]),
    ("Y^2 - X1*Y + X2", &["X1^4 - 2", "X2^2 + 2"]),
    ("Y - X1 - X2 - X3", &["X1^2 - 2", "X2^2 - 3", "X3^2 - 5"]),
    ("Y^2 - X1*X2*X3", &["X1^2 - 2", "X2^2 + 1", "X3^2 - X3 - 1"]),
    ("(Y - X2*X3)^2*(Y - 1)", &["(X1 - 1)^2", "X2^2 - 2", "X3^2 + 1"]),
    ("X1*Y^2 + X2*Y + X3", &["X1^2 + 1", "X2^3 - 2", "X3^2 - 3"]),
    ("(X1 - X2)*Y^2 + (X2 - X3)*Y + 1", &["X1^2 - 2", "X2^2 - 2", "X3^2 - 2"]),
];
