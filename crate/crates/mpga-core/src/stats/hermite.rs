/// Probabilists' Hermite polynomial He_n(x) via the three-term recurrence
/// He_{n+1} = x He_n - n He_{n-1}, He_0 = 1, He_1 = x.
pub fn hermite(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for k in 1..n {
                let next = x * cur - k as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}
