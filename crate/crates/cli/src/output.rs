//! Records printed one per line as JSON, or as aligned tables with `--pretty`.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i128),
    Num(f64),
    Nums(Vec<f64>),
    Str(String),
    Bool(bool),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i128)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x as i128)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Str(x.to_owned())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Str(x)
    }
}

impl From<Vec<f64>> for Value {
    fn from(x: Vec<f64>) -> Self {
        Value::Nums(x)
    }
}

/// An ordered list of named fields.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record(Vec<(&'static str, Value)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    fn keys(&self) -> Vec<&'static str> {
        self.0.iter().map(|(k, _)| *k).collect()
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        for (i, (key, value)) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}:{}", quote(key), json_value(value));
        }
        out.push('}');
        out
    }
}

/// 17 significant digits. Non-finite values have no JSON number form and
/// are written as the strings `"inf"`, `"-inf"` and `"nan"`.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_value(value: &Value) -> String {
    match value {
        Value::Int(i) => i.to_string(),
        Value::Num(x) if x.is_finite() => number(*x),
        Value::Num(x) => quote(&number(*x)),
        Value::Nums(xs) => {
            let items: Vec<String> = xs.iter().map(|&x| json_value(&Value::Num(x))).collect();
            format!("[{}]", items.join(","))
        }
        Value::Str(s) => quote(s),
        Value::Bool(b) => b.to_string(),
    }
}

fn plain_value(value: &Value) -> String {
    match value {
        Value::Int(i) => i.to_string(),
        Value::Num(x) => number(*x),
        Value::Nums(xs) => xs.iter().map(|&x| number(x)).collect::<Vec<_>>().join(" "),
        Value::Str(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
    }
}

/// Renders records as JSON lines, or, when `pretty`, as one aligned table
/// per run of consecutive records sharing the same keys.
pub fn render(records: &[Record], pretty: bool) -> String {
    let mut out = String::new();
    if !pretty {
        for r in records {
            out.push_str(&r.to_json());
            out.push('\n');
        }
        return out;
    }
    let mut start = 0;
    while start < records.len() {
        let keys = records[start].keys();
        let mut end = start + 1;
        while end < records.len() && records[end].keys() == keys {
            end += 1;
        }
        if start > 0 {
            out.push('\n');
        }
        table(&mut out, &keys, &records[start..end]);
        start = end;
    }
    out
}

fn table(out: &mut String, keys: &[&str], rows: &[Record]) {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.0.iter().map(|(_, v)| plain_value(v)).collect())
        .collect();
    let widths: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| cells.iter().map(|row| row[i].len()).fold(k.len(), usize::max))
        .collect();
    let line = |out: &mut String, items: &[&str]| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(out, keys);
    for row in &cells {
        line(out, &row.iter().map(String::as_str).collect::<Vec<_>>());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(number(0.25), "2.5000000000000000e-1");
        assert_eq!(number(0.1), "1.0000000000000001e-1");
        assert_eq!(number(0.0), "0.0000000000000000e0");
        assert_eq!(number(f64::NEG_INFINITY), "-inf");
        for x in [0.1, 1.0 / 3.0, 2.084_037_178_807_143e-6, 123456.789] {
            assert_eq!(number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_lines() {
        let r = Record::new()
            .with("t", 3usize)
            .with("tail", "upper")
            .with("log_bound", f64::NEG_INFINITY)
            .with("pmf", vec![0.5, 0.5])
            .with("pass", true);
        let text = r.to_json();
        assert_eq!(
            text,
            r#"{"t":3,"tail":"upper","log_bound":"-inf","pmf":[5.0000000000000000e-1,5.0000000000000000e-1],"pass":true}"#
        );
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["pmf"][1].as_f64(), Some(0.5));
    }

    #[test]
    fn pretty_groups_by_keys() {
        let rows = vec![
            Record::new().with("t", 1usize).with("x", "a"),
            Record::new().with("t", 10usize).with("x", "bbb"),
            Record::new().with("result", "PASS"),
        ];
        assert_eq!(render(&rows, true), "t   x\n1   a\n10  bbb\n\nresult\nPASS\n");
        assert_eq!(render(&rows, false).lines().count(), 3);
    }
}
