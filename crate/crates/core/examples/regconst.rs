fn main() {
    let mut max_ratio: f64 = 0.0;
    let mut arg = 0u64;
    for k in 3..=100u64 {
        let r = gnplab::threshold::solve_c_hat(k, 1e-12).unwrap();
        let dev = (r.c_hat - r.asymptotic).abs() / (k as f64).sqrt();
        if dev > max_ratio { max_ratio = dev; arg = k; }
        if k <= 6 || k % 20 == 0 { println!("k={k}: c_hat={:.6} asym={:.6} dev/sqrt(k)={:.6}", r.c_hat, r.asymptotic, dev); }
    }
    println!("MAX dev/sqrt(k) = {max_ratio:.6} at k={arg}");
}
