use congruent_core::{CongruentParam, CurvePoint, Point, Rat, Triangle, WImage};
use serde_json::{json, Value};

/// One command result, kept in both renderings so text and JSON modes
/// always carry the same values.
pub struct Output {
    pub lines: Vec<String>,
    pub json: Value,
}

impl Output {
    pub fn new(lines: Vec<String>, json: Value) -> Self {
        Output { lines, json }
    }

    pub fn single(text: String, json: Value) -> Self {
        Output::new(vec![text], json)
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
            s.push('\n');
            s
        } else {
            self.lines.iter().map(|l| format!("{l}\n")).collect()
        }
    }
}

pub fn rat(q: &Rat) -> Value {
    Value::String(q.to_string())
}

pub fn point(p: &CurvePoint) -> Value {
    match p {
        Point::Infinity => Value::String("O".into()),
        Point::Affine { x, y } => json!({ "x": rat(x), "y": rat(y) }),
    }
}

pub fn triangle(t: &Triangle) -> Value {
    json!({ "x": rat(&t.x), "y": rat(&t.y), "z": rat(&t.z) })
}

pub fn report_line(t: &CongruentParam, w: &WImage) -> String {
    format!("t={t} W={w} cert={}", t.cert())
}

pub fn report_json(t: &CongruentParam, w: &WImage) -> Value {
    json!({
        "t": t.to_string(),
        "w1": w.c1.to_string(),
        "w2": w.c2.to_string(),
        "cert": rat(t.cert()),
    })
}
