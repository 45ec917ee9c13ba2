//! Unquantized `f64` versions of the check-node rules.

/// Paper-and-pencil sign: 0 for 0, otherwise +-1.
pub fn sign(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum()
    }
}

/// Exact box-plus in the numerically stable min-plus-correction form.
pub fn box_plus(a: f64, b: f64) -> f64 {
    let (ma, mb) = (a.abs(), b.abs());
    let mag = ma.min(mb) + (-(ma + mb)).exp().ln_1p() - (-(ma - mb).abs()).exp().ln_1p();
    sign(a) * sign(b) * mag.max(0.0)
}

pub fn box_plus_fold(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    values.into_iter().reduce(box_plus)
}

/// Exact SPA extrinsic output for every edge.
pub fn cn_update_spa(inputs: &[f64], outputs: &mut [f64]) {
    for (e, out) in outputs.iter_mut().enumerate() {
        let others = inputs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &v)| v);
        *out = box_plus_fold(others).unwrap_or(0.0);
    }
}

pub fn cn_update_msa(inputs: &[f64], outputs: &mut [f64]) {
    for (e, out) in outputs.iter_mut().enumerate() {
        let others = inputs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &v)| v);
        let (s, m) = others.fold((1.0, f64::INFINITY), |(s, m), v| {
            (s * sign(v), m.min(v.abs()))
        });
        *out = s * m;
    }
}

/// Blended update in real arithmetic, same tie rule as the fixed-point one.
pub fn cn_update_blend(inputs: &[f64], outputs: &mut [f64]) {
    let mut weakest = 0;
    for (e, v) in inputs.iter().enumerate() {
        if v.abs() < inputs[weakest].abs() {
            weakest = e;
        }
    }
    let extrinsic = box_plus_fold(
        inputs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != weakest)
            .map(|(_, &v)| v),
    )
    .unwrap_or(0.0);
    let total = box_plus(extrinsic, inputs[weakest]).abs();
    for (e, out) in outputs.iter_mut().enumerate() {
        *out = if e == weakest {
            extrinsic
        } else {
            let s: f64 = inputs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != e)
                .map(|(_, &v)| sign(v))
                .product();
            s * total
        };
    }
}
