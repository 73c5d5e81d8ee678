//! Locale-independent CSV text.

/// Shortest round-trip decimal form, rounded to `precision` fractional
/// digits when it is longer. Never uses exponents or a negative zero.
pub fn format_number(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let shortest = format!("{x}");
    let frac_len = shortest.split_once('.').map_or(0, |(_, f)| f.len());
    let mut s = if frac_len <= precision {
        shortest
    } else {
        let rounded = format!("{x:.precision$}");
        if rounded.contains('.') {
            rounded.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            rounded
        }
    };
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Accumulates CSV rows with `\n` line endings.
#[derive(Debug)]
pub struct Csv {
    precision: usize,
    buf: String,
}

impl Csv {
    pub fn new(precision: usize, header: &[&str]) -> Self {
        let mut csv = Csv {
            precision,
            buf: String::new(),
        };
        csv.raw_row(header.iter().map(|s| s.to_string()));
        csv
    }

    pub fn raw_row(&mut self, cells: impl IntoIterator<Item = String>) {
        let cells: Vec<String> = cells.into_iter().collect();
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn num(&self, x: f64) -> String {
        format_number(x, self.precision)
    }

    pub fn numbers(&mut self, xs: &[f64]) {
        let cells: Vec<String> = xs.iter().map(|&x| self.num(x)).collect();
        self.raw_row(cells);
    }

    pub fn labeled(&mut self, label: &str, x: f64) {
        let v = self.num(x);
        self.raw_row([label.to_string(), v]);
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}
