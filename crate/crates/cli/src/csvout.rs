//! Minimal CSV writing: header plus rows, RFC-style quoting for fields that
//! need it, floats always at 17 significant digits (round-trip exact).

pub use stegwolf_core::fmt::f64_17;

/// Quote a field if it contains a comma, quote or newline.
pub fn field(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Csv { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.iter().map(|f| field(f)).collect::<Vec<_>>().join(","));
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}
