//! Predicates over record fields.
//!
//! ```text
//! expr    := term (("or" | "||") term)*
//! term    := factor (("and" | "&&") factor)*
//! factor  := ("not" | "!") factor | "(" expr ")" | field [op literal]
//! op      := "=" | "==" | "!=" | "<" | "<=" | ">" | ">="
//! literal := integer | true | false | null | "[" [integer ("," integer)*] "]"
//! ```
//!
//! A bare field must be boolean. Missing values (unclassified flags, roots of
//! a non-splitting χ) are null: they equal only `null`, fail every ordering,
//! and read as false when bare.

use std::fmt;

use crate::record::MatroidRecord;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("type error: {0}")]
    Type(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Int,
    Bool,
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    N,
    B2,
    AutOrder,
    M(usize),
    ChiA,
    ChiB,
    Mv,
    ChiRoots,
    IntSplit,
    Supersolvable,
    DivisionallyFree,
    InductivelyFree,
    AtomBalanced,
    CoatomBalanced,
    StronglyBalanced,
    Representable,
    Classified,
}

pub const FIELDS: &[&str] = &[
    "n",
    "b2",
    "aut_order",
    "m2 .. m31",
    "chi_a",
    "chi_b",
    "mv",
    "chi_roots",
    "int_split",
    "supersolvable",
    "divisionally_free",
    "inductively_free",
    "atom_balanced",
    "coatom_balanced",
    "strongly_balanced",
    "representable",
    "classified",
];

impl Field {
    fn parse(name: &str) -> Option<Field> {
        Some(match name {
            "n" => Field::N,
            "b2" => Field::B2,
            "aut_order" => Field::AutOrder,
            "chi_a" => Field::ChiA,
            "chi_b" => Field::ChiB,
            "mv" => Field::Mv,
            "chi_roots" => Field::ChiRoots,
            "int_split" => Field::IntSplit,
            "supersolvable" => Field::Supersolvable,
            "divisionally_free" => Field::DivisionallyFree,
            "inductively_free" => Field::InductivelyFree,
            "atom_balanced" => Field::AtomBalanced,
            "coatom_balanced" => Field::CoatomBalanced,
            "strongly_balanced" => Field::StronglyBalanced,
            "representable" => Field::Representable,
            "classified" => Field::Classified,
            _ => {
                let k: usize = name.strip_prefix('m')?.parse().ok()?;
                if !(2..=31).contains(&k) {
                    return None;
                }
                Field::M(k)
            }
        })
    }

    fn kind(self) -> Kind {
        match self {
            Field::N | Field::B2 | Field::AutOrder | Field::M(_) | Field::ChiA | Field::ChiB => Kind::Int,
            Field::Mv | Field::ChiRoots => Kind::List,
            _ => Kind::Bool,
        }
    }

    fn value(self, r: &MatroidRecord) -> Value {
        let flag = |f: fn(&crate::record::Flags) -> Option<bool>| match r.flags.as_ref().and_then(f) {
            Some(b) => Value::Bool(b),
            None => Value::Null,
        };
        match self {
            Field::N => Value::Int(r.n as i128),
            Field::B2 => Value::Int(r.b2 as i128),
            Field::AutOrder => Value::Int(r.aut_order as i128),
            Field::M(k) => Value::Int(r.m(k) as i128),
            Field::ChiA => r.chi_roots.map_or(Value::Null, |[a, _]| Value::Int(a as i128)),
            Field::ChiB => r.chi_roots.map_or(Value::Null, |[_, b]| Value::Int(b as i128)),
            Field::Mv => Value::List(r.mv.iter().map(|&x| x as i128).collect()),
            Field::ChiRoots => r
                .chi_roots
                .map_or(Value::Null, |[a, b]| Value::List(vec![a as i128, b as i128])),
            Field::IntSplit => Value::Bool(r.int_split()),
            Field::Supersolvable => flag(|f| Some(f.supersolvable)),
            Field::DivisionallyFree => flag(|f| Some(f.divisionally_free)),
            Field::InductivelyFree => flag(|f| Some(f.inductively_free)),
            Field::AtomBalanced => flag(|f| f.atom_balanced),
            Field::CoatomBalanced => flag(|f| f.coatom_balanced),
            Field::StronglyBalanced => flag(|f| f.strongly_balanced),
            Field::Representable => r.representable().map_or(Value::Null, Value::Bool),
            Field::Classified => Value::Bool(r.is_classified()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Value {
    Int(i128),
    Bool(bool),
    List(Vec<i128>),
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Expr {
    Or(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Bare(Field),
    Cmp(Field, Op, Value),
}

impl Expr {
    fn eval(&self, r: &MatroidRecord) -> bool {
        match self {
            Expr::Or(a, b) => a.eval(r) || b.eval(r),
            Expr::And(a, b) => a.eval(r) && b.eval(r),
            Expr::Not(a) => !a.eval(r),
            Expr::Bare(f) => f.value(r) == Value::Bool(true),
            Expr::Cmp(f, op, lit) => compare(&f.value(r), *op, lit),
        }
    }
}

fn compare(v: &Value, op: Op, lit: &Value) -> bool {
    if matches!(v, Value::Null) || matches!(lit, Value::Null) {
        return match op {
            Op::Eq => v == lit,
            Op::Ne => v != lit,
            _ => false,
        };
    }
    let ord = match (v, lit) {
        (Value::Int(a), Value::Int(b)) => a.cmp(b),
        _ => {
            return match op {
                Op::Eq => v == lit,
                Op::Ne => v != lit,
                _ => false,
            }
        }
    };
    match op {
        Op::Eq => ord.is_eq(),
        Op::Ne => ord.is_ne(),
        Op::Lt => ord.is_lt(),
        Op::Le => ord.is_le(),
        Op::Gt => ord.is_gt(),
        Op::Ge => ord.is_ge(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i128),
    Op(Op),
    And,
    Or,
    Not,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, QueryError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |pos: usize, message: &str| QueryError::Syntax {
        pos,
        message: message.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |s: &str| src[i..].starts_with(s);
        let tok = if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if two("&&") {
            i += 2;
            Tok::And
        } else if two("||") {
            i += 2;
            Tok::Or
        } else if two("==") {
            i += 2;
            Tok::Op(Op::Eq)
        } else if two("!=") {
            i += 2;
            Tok::Op(Op::Ne)
        } else if two("<=") {
            i += 2;
            Tok::Op(Op::Le)
        } else if two(">=") {
            i += 2;
            Tok::Op(Op::Ge)
        } else {
            i += 1;
            match c {
                b'=' => Tok::Op(Op::Eq),
                b'<' => Tok::Op(Op::Lt),
                b'>' => Tok::Op(Op::Gt),
                b'!' => Tok::Not,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBracket,
                b']' => Tok::RBracket,
                b',' => Tok::Comma,
                b'-' | b'0'..=b'9' => {
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let v = src[start..i]
                        .parse()
                        .map_err(|_| syntax(start, "bad integer"))?;
                    Tok::Int(v)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                        i += 1;
                    }
                    match &src[start..i] {
                        "and" => Tok::And,
                        "or" => Tok::Or,
                        "not" => Tok::Not,
                        w => Tok::Ident(w.to_string()),
                    }
                }
                _ => return Err(syntax(start, "unexpected character")),
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: &str) -> Result<T, QueryError> {
        Err(QueryError::Syntax {
            pos: self.offset(),
            message: message.to_string(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, QueryError> {
        let mut e = self.term()?;
        while self.eat(&Tok::Or) {
            e = Expr::Or(Box::new(e), Box::new(self.term()?));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr, QueryError> {
        let mut e = self.factor()?;
        while self.eat(&Tok::And) {
            e = Expr::And(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr, QueryError> {
        if self.eat(&Tok::Not) {
            return Ok(Expr::Not(Box::new(self.factor()?)));
        }
        if self.eat(&Tok::LParen) {
            let e = self.expr()?;
            if !self.eat(&Tok::RParen) {
                return self.err("expected ')'");
            }
            return Ok(e);
        }
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return self.err("expected a field");
        };
        self.pos += 1;
        let field = Field::parse(&name).ok_or(QueryError::UnknownField(name.clone()))?;
        let Some(&Tok::Op(op)) = self.peek() else {
            if field.kind() != Kind::Bool {
                return Err(QueryError::Type(format!("{name} is not boolean and needs a comparison")));
            }
            return Ok(Expr::Bare(field));
        };
        self.pos += 1;
        let lit = self.literal()?;
        let ok = match (&lit, field.kind()) {
            (Value::Null, _) => matches!(op, Op::Eq | Op::Ne),
            (Value::Int(_), Kind::Int) => true,
            (Value::Bool(_) | Value::List(_), _) => {
                matches!(op, Op::Eq | Op::Ne)
                    && matches!(
                        (&lit, field.kind()),
                        (Value::Bool(_), Kind::Bool) | (Value::List(_), Kind::List)
                    )
            }
            _ => false,
        };
        if !ok {
            return Err(QueryError::Type(format!("cannot compare {name} with {lit}")));
        }
        let lit = match (field, lit) {
            (Field::Mv, Value::List(mut v)) => {
                while v.last() == Some(&0) {
                    v.pop();
                }
                Value::List(v)
            }
            (_, lit) => lit,
        };
        Ok(Expr::Cmp(field, op, lit))
    }

    fn literal(&mut self) -> Result<Value, QueryError> {
        let Some(t) = self.peek().cloned() else {
            return self.err("expected a value");
        };
        self.pos += 1;
        match t {
            Tok::Int(v) => Ok(Value::Int(v)),
            Tok::Ident(w) if w == "true" => Ok(Value::Bool(true)),
            Tok::Ident(w) if w == "false" => Ok(Value::Bool(false)),
            Tok::Ident(w) if w == "null" => Ok(Value::Null),
            Tok::LBracket => {
                let mut items = Vec::new();
                if self.eat(&Tok::RBracket) {
                    return Ok(Value::List(items));
                }
                loop {
                    match self.peek().cloned() {
                        Some(Tok::Int(v)) => {
                            self.pos += 1;
                            items.push(v);
                        }
                        _ => return self.err("expected an integer"),
                    }
                    if self.eat(&Tok::RBracket) {
                        return Ok(Value::List(items));
                    }
                    if !self.eat(&Tok::Comma) {
                        return self.err("expected ',' or ']'");
                    }
                }
            }
            _ => {
                self.pos -= 1;
                self.err("expected a value")
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::List(v) => write!(f, "{v:?}"),
            Value::Null => f.write_str("null"),
        }
    }
}

/// A parsed predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query(Expr);

impl Query {
    pub fn parse(src: &str) -> Result<Query, QueryError> {
        let mut p = Parser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.err("unexpected trailing input");
        }
        Ok(Query(e))
    }

    pub fn matches(&self, r: &MatroidRecord) -> bool {
        self.0.eval(r)
    }
}

pub fn query<'a>(records: &'a [MatroidRecord], q: &Query) -> Vec<&'a MatroidRecord> {
    records.iter().filter(|r| q.matches(r)).collect()
}

pub fn count(records: &[MatroidRecord], q: &Query) -> usize {
    records.iter().filter(|r| q.matches(r)).count()
}
