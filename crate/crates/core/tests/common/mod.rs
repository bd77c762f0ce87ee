//! Test-side free-group arithmetic on strings over `x X y Y`, sharing no
//! code with the library.
#![allow(dead_code)]

pub fn inv_char(c: char) -> char {
    if c.is_uppercase() {
        c.to_ascii_lowercase()
    } else {
        c.to_ascii_uppercase()
    }
}

/// Stack-based free reduction.
pub fn reduce(s: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    for c in s.chars() {
        if out.last() == Some(&inv_char(c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

pub fn inverse(s: &str) -> String {
    s.chars().rev().map(inv_char).collect()
}

pub fn mul(a: &str, b: &str) -> String {
    reduce(&format!("{a}{b}"))
}

/// Applies `x ↦ img_x`, `y ↦ img_y`.
pub fn substitute(s: &str, img_x: &str, img_y: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        out.push_str(&match c {
            'x' => img_x.to_string(),
            'X' => inverse(img_x),
            'y' => img_y.to_string(),
            'Y' => inverse(img_y),
            _ => panic!("bad letter {c}"),
        });
    }
    reduce(&out)
}

pub fn f(s: &str) -> String {
    substitute(s, "xy", "X")
}

pub fn f_inv(s: &str) -> String {
    substitute(s, "Y", "yx")
}

pub fn f_pow(s: &str, n: i64) -> String {
    let mut w = s.to_string();
    for _ in 0..n.unsigned_abs() {
        w = if n > 0 { f(&w) } else { f_inv(&w) };
    }
    w
}

pub const C: &str = "xyXY";

pub fn c_pow(n: i64) -> String {
    let unit = if n >= 0 { C.to_string() } else { inverse(C) };
    unit.repeat(n.unsigned_abs() as usize)
}

/// `(L, R)` with `w = c^L … c^(-R)`, maximal in absolute value, by direct
/// prefix and suffix matching. `None` for powers of `c`.
pub fn l_r(w: &str) -> Option<(i64, i64)> {
    let len = w.len() as i64;
    if len % 4 == 0 && (c_pow(len / 4) == w || c_pow(-len / 4) == w) {
        return None;
    }
    let mut l = 0i64;
    for sign in [1i64, -1] {
        let mut k = 1;
        while w.starts_with(&c_pow(sign * k)) {
            k += 1;
        }
        if k > 1 {
            l = sign * (k - 1);
        }
    }
    let mut r = 0i64;
    for sign in [1i64, -1] {
        let mut k = 1;
        while w.ends_with(&c_pow(-sign * k)) {
            k += 1;
        }
        if k > 1 {
            r = sign * (k - 1);
        }
    }
    Some((l, r))
}

/// All reduced words of length exactly `len`.
pub fn all_words(len: usize) -> Vec<String> {
    let mut cur = vec![String::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(cur.len() * 3);
        for w in &cur {
            for c in ['x', 'X', 'y', 'Y'] {
                if !w.ends_with(inv_char(c)) {
                    next.push(format!("{w}{c}"));
                }
            }
        }
        cur = next;
    }
    cur
}
