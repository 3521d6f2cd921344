fn main() {
    let pts: Vec<(f64, f64)> = (0..40)
        .map(|i| {
            let x = 10f64.powf(3.0 + i as f64 * 0.25);
            let l = x.ln();
            (x, x.powf(2.0 / 3.0) * (3.0 + 2.0 * l + l.powi(4)))
        })
        .collect();
    let rep = subgroup_census::fit::fit_log_polynomial(&pts, 4).unwrap();
    println!("{:?}", rep.fitted.coeffs);
    println!("cond {}", rep.condition_diag);
}
