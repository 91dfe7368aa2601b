//! Parser and printer for the `.qlab` structure-description format.
//!
//! A document is a sequence of named definitions:
//!
//! ```text
//! # line comment
//! suplattice two {
//!   elements: [o, i];
//!   join: { (o,o)=o; (o,i)=i; (i,o)=i; (i,i)=i; }
//! }
//! quantale two {
//!   lattice: two;
//!   mult: { default: o; (i,i)=i; }
//!   star: { o=o; i=i; }
//!   unit: i;
//! }
//! module m { quantale: two; lattice: L; side: right;
//!            action: { ... } inner: { ... } }
//! bimodule x { left: A; right: B; carrier: L;
//!              lact: { ... } ract: { ... } linner: { ... } rinner: { ... } }
//! ```
//!
//! Lattices may alternatively be given by `order: { a<=b; ... }`, in which
//! case joins are derived and must exist. Tables accept sparse entries with
//! an explicit `default: <element>;` escape. Action tables are written
//! `(element, scalar) = element` for both sides; inner products are
//! `(element, element) = scalar`. Names are unique per kind; references
//! may point at definitions in other loaded files or the bundled catalog.

use std::fmt;

/// A parse or resolution diagnostic with a source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

/// A table of entries; keys are one or two element names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TableDef {
    pub entries: Vec<(Vec<String>, String)>,
    pub default: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeBody {
    Join(TableDef),
    Order(Vec<(String, String)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeDef {
    pub name: String,
    pub elements: Vec<String>,
    pub body: LatticeBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaleDef {
    pub name: String,
    pub lattice: String,
    pub mult: TableDef,
    pub star: TableDef,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDef {
    pub name: String,
    pub quantale: String,
    pub lattice: String,
    pub right_side: bool,
    pub action: TableDef,
    pub inner: Option<TableDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleDef {
    pub name: String,
    pub left: String,
    pub right: String,
    pub carrier: String,
    pub lact: TableDef,
    pub ract: TableDef,
    pub linner: Option<TableDef>,
    pub rinner: Option<TableDef>,
}

/// A parsed document. Definition order is preserved; spans live in a side
/// table so that equality is purely structural.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub lattices: Vec<LatticeDef>,
    pub quantales: Vec<QuantaleDef>,
    pub modules: Vec<ModuleDef>,
    pub bimodules: Vec<BimoduleDef>,
}

impl Document {
    pub fn merge(&mut self, other: Document) {
        self.lattices.extend(other.lattices);
        self.quantales.extend(other.quantales);
        self.modules.extend(other.modules);
        self.bimodules.extend(other.bimodules);
    }

    pub fn is_empty(&self) -> bool {
        self.lattices.is_empty()
            && self.quantales.is_empty()
            && self.modules.is_empty()
            && self.bimodules.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Semi,
    Comma,
    Eq,
    Leq,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    bump(&mut chars);
                    if c == '\n' {
                        break;
                    }
                }
            }
            '{' | '}' | '(' | ')' | '[' | ']' | ':' | ';' | ',' | '=' => {
                bump(&mut chars);
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    _ => Tok::Eq,
                };
                tokens.push(Token {
                    tok,
                    line: tline,
                    col: tcol,
                });
            }
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    tokens.push(Token {
                        tok: Tok::Leq,
                        line: tline,
                        col: tcol,
                    });
                } else {
                    return Err(Diagnostic {
                        message: "expected '<='".into(),
                        line: tline,
                        col: tcol,
                    });
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    tok: Tok::Ident(ident),
                    line: tline,
                    col: tcol,
                });
            }
            other => {
                return Err(Diagnostic {
                    message: format!("unexpected character '{other}'"),
                    line: tline,
                    col: tcol,
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn error(&self, message: impl Into<String>) -> Diagnostic {
        let (line, col) = self.here();
        Diagnostic {
            message: message.into(),
            line,
            col,
        }
    }

    fn eat(&mut self, expected: &Tok) -> Result<(), Diagnostic> {
        if self.peek() == Some(expected) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {expected:?}, found {:?}", self.peek())))
        }
    }

    fn eat_opt(&mut self, expected: &Tok) {
        if self.peek() == Some(expected) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String, Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            other => Err(self.error(format!("expected identifier, found {other:?}"))),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(name)) if name == word => {
                self.pos += 1;
                Ok(())
            }
            other => Err(self.error(format!("expected '{word}', found {other:?}"))),
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(name)) if name == word)
    }

    fn table(&mut self) -> Result<TableDef, Diagnostic> {
        self.eat(&Tok::LBrace)?;
        let mut table = TableDef::default();
        while self.peek() != Some(&Tok::RBrace) {
            if self.at_keyword("default") {
                self.keyword("default")?;
                self.eat(&Tok::Colon)?;
                let value = self.ident()?;
                if table.default.replace(value).is_some() {
                    return Err(self.error("duplicate default in table"));
                }
                self.eat(&Tok::Semi)?;
                continue;
            }
            match self.peek() {
                Some(Tok::LParen) => {
                    self.eat(&Tok::LParen)?;
                    let a = self.ident()?;
                    self.eat(&Tok::Comma)?;
                    let b = self.ident()?;
                    self.eat(&Tok::RParen)?;
                    self.eat(&Tok::Eq)?;
                    let value = self.ident()?;
                    self.eat(&Tok::Semi)?;
                    table.entries.push((vec![a, b], value));
                }
                Some(Tok::Ident(_)) => {
                    let a = self.ident()?;
                    self.eat(&Tok::Eq)?;
                    let value = self.ident()?;
                    self.eat(&Tok::Semi)?;
                    table.entries.push((vec![a], value));
                }
                other => {
                    return Err(self.error(format!("expected table entry, found {other:?}")))
                }
            }
        }
        self.eat(&Tok::RBrace)?;
        self.eat_opt(&Tok::Semi);
        Ok(table)
    }

    fn name_field(&mut self, key: &str) -> Result<String, Diagnostic> {
        self.keyword(key)?;
        self.eat(&Tok::Colon)?;
        let value = self.ident()?;
        self.eat(&Tok::Semi)?;
        Ok(value)
    }

    fn table_field(&mut self, key: &str) -> Result<TableDef, Diagnostic> {
        self.keyword(key)?;
        self.eat(&Tok::Colon)?;
        self.table()
    }

    fn suplattice(&mut self) -> Result<LatticeDef, Diagnostic> {
        self.keyword("suplattice")?;
        let name = self.ident()?;
        self.eat(&Tok::LBrace)?;
        self.keyword("elements")?;
        self.eat(&Tok::Colon)?;
        self.eat(&Tok::LBracket)?;
        let mut elements = vec![self.ident()?];
        while self.peek() == Some(&Tok::Comma) {
            self.eat(&Tok::Comma)?;
            elements.push(self.ident()?);
        }
        self.eat(&Tok::RBracket)?;
        self.eat(&Tok::Semi)?;
        let body = if self.at_keyword("join") {
            LatticeBody::Join(self.table_field("join")?)
        } else if self.at_keyword("order") {
            self.keyword("order")?;
            self.eat(&Tok::Colon)?;
            self.eat(&Tok::LBrace)?;
            let mut pairs = Vec::new();
            while self.peek() != Some(&Tok::RBrace) {
                let a = self.ident()?;
                self.eat(&Tok::Leq)?;
                let b = self.ident()?;
                self.eat(&Tok::Semi)?;
                pairs.push((a, b));
            }
            self.eat(&Tok::RBrace)?;
            self.eat_opt(&Tok::Semi);
            LatticeBody::Order(pairs)
        } else {
            return Err(self.error("expected 'join' or 'order' section"));
        };
        self.eat(&Tok::RBrace)?;
        Ok(LatticeDef {
            name,
            elements,
            body,
        })
    }

    fn quantale(&mut self) -> Result<QuantaleDef, Diagnostic> {
        self.keyword("quantale")?;
        let name = self.ident()?;
        self.eat(&Tok::LBrace)?;
        let lattice = self.name_field("lattice")?;
        let mult = self.table_field("mult")?;
        let star = self.table_field("star")?;
        let unit = if self.at_keyword("unit") {
            Some(self.name_field("unit")?)
        } else {
            None
        };
        self.eat(&Tok::RBrace)?;
        Ok(QuantaleDef {
            name,
            lattice,
            mult,
            star,
            unit,
        })
    }

    fn module(&mut self) -> Result<ModuleDef, Diagnostic> {
        self.keyword("module")?;
        let name = self.ident()?;
        self.eat(&Tok::LBrace)?;
        let quantale = self.name_field("quantale")?;
        let lattice = self.name_field("lattice")?;
        let side = self.name_field("side")?;
        let right_side = match side.as_str() {
            "right" => true,
            "left" => false,
            _ => return Err(self.error("side must be 'right' or 'left'")),
        };
        let action = self.table_field("action")?;
        let inner = if self.at_keyword("inner") {
            Some(self.table_field("inner")?)
        } else {
            None
        };
        self.eat(&Tok::RBrace)?;
        Ok(ModuleDef {
            name,
            quantale,
            lattice,
            right_side,
            action,
            inner,
        })
    }

    fn bimodule(&mut self) -> Result<BimoduleDef, Diagnostic> {
        self.keyword("bimodule")?;
        let name = self.ident()?;
        self.eat(&Tok::LBrace)?;
        let left = self.name_field("left")?;
        let right = self.name_field("right")?;
        let carrier = self.name_field("carrier")?;
        let lact = self.table_field("lact")?;
        let ract = self.table_field("ract")?;
        let linner = if self.at_keyword("linner") {
            Some(self.table_field("linner")?)
        } else {
            None
        };
        let rinner = if self.at_keyword("rinner") {
            Some(self.table_field("rinner")?)
        } else {
            None
        };
        self.eat(&Tok::RBrace)?;
        Ok(BimoduleDef {
            name,
            left,
            right,
            carrier,
            lact,
            ract,
            linner,
            rinner,
        })
    }
}

/// Parses a `.qlab` document; diagnostics carry line and column.
pub fn parse_document(text: &str) -> Result<Document, Diagnostic> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let mut doc = Document::default();
    while parser.peek().is_some() {
        if parser.at_keyword("suplattice") {
            doc.lattices.push(parser.suplattice()?);
        } else if parser.at_keyword("quantale") {
            doc.quantales.push(parser.quantale()?);
        } else if parser.at_keyword("module") {
            doc.modules.push(parser.module()?);
        } else if parser.at_keyword("bimodule") {
            doc.bimodules.push(parser.bimodule()?);
        } else {
            return Err(parser.error(
                "expected a 'suplattice', 'quantale', 'module' or 'bimodule' definition",
            ));
        }
    }
    // names unique per kind
    for (kind, names) in [
        ("suplattice", doc.lattices.iter().map(|d| &d.name).collect::<Vec<_>>()),
        ("quantale", doc.quantales.iter().map(|d| &d.name).collect()),
        ("module", doc.modules.iter().map(|d| &d.name).collect()),
        ("bimodule", doc.bimodules.iter().map(|d| &d.name).collect()),
    ] {
        let mut sorted = names.clone();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Diagnostic {
                    message: format!("duplicate {kind} name '{}'", pair[0]),
                    line: 1,
                    col: 1,
                });
            }
        }
    }
    Ok(doc)
}

fn print_table(out: &mut String, indent: &str, key: &str, table: &TableDef) {
    out.push_str(indent);
    out.push_str(key);
    out.push_str(": {");
    if let Some(default) = &table.default {
        out.push_str(&format!(" default: {default};"));
    }
    out.push('\n');
    for (args, value) in &table.entries {
        match args.as_slice() {
            [a] => out.push_str(&format!("{indent}  {a}={value};\n")),
            [a, b] => out.push_str(&format!("{indent}  ({a},{b})={value};\n")),
            _ => unreachable!("tables have one or two arguments"),
        }
    }
    out.push_str(indent);
    out.push_str("}\n");
}

/// Prints a document in the canonical format; `parse_document` of the
/// output yields a structurally identical document.
pub fn print_document(doc: &Document) -> String {
    let mut out = String::new();
    for lat in &doc.lattices {
        out.push_str(&format!("suplattice {} {{\n", lat.name));
        out.push_str(&format!("  elements: [{}];\n", lat.elements.join(", ")));
        match &lat.body {
            LatticeBody::Join(table) => print_table(&mut out, "  ", "join", table),
            LatticeBody::Order(pairs) => {
                out.push_str("  order: {\n");
                for (a, b) in pairs {
                    out.push_str(&format!("    {a}<={b};\n"));
                }
                out.push_str("  }\n");
            }
        }
        out.push_str("}\n");
    }
    for q in &doc.quantales {
        out.push_str(&format!("quantale {} {{\n", q.name));
        out.push_str(&format!("  lattice: {};\n", q.lattice));
        print_table(&mut out, "  ", "mult", &q.mult);
        print_table(&mut out, "  ", "star", &q.star);
        if let Some(unit) = &q.unit {
            out.push_str(&format!("  unit: {unit};\n"));
        }
        out.push_str("}\n");
    }
    for m in &doc.modules {
        out.push_str(&format!("module {} {{\n", m.name));
        out.push_str(&format!("  quantale: {};\n", m.quantale));
        out.push_str(&format!("  lattice: {};\n", m.lattice));
        out.push_str(&format!(
            "  side: {};\n",
            if m.right_side { "right" } else { "left" }
        ));
        print_table(&mut out, "  ", "action", &m.action);
        if let Some(inner) = &m.inner {
            print_table(&mut out, "  ", "inner", inner);
        }
        out.push_str("}\n");
    }
    for b in &doc.bimodules {
        out.push_str(&format!("bimodule {} {{\n", b.name));
        out.push_str(&format!("  left: {};\n", b.left));
        out.push_str(&format!("  right: {};\n", b.right));
        out.push_str(&format!("  carrier: {};\n", b.carrier));
        print_table(&mut out, "  ", "lact", &b.lact);
        print_table(&mut out, "  ", "ract", &b.ract);
        if let Some(linner) = &b.linner {
            print_table(&mut out, "  ", "linner", linner);
        }
        if let Some(rinner) = &b.rinner {
            print_table(&mut out, "  ", "rinner", rinner);
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = r#"
# the two-element Boolean algebra
suplattice two {
  elements: [o, i];
  join: { (o,o)=o; (o,i)=i; (i,o)=i; (i,i)=i; }
}
quantale two {
  lattice: two;
  mult: { default: o; (i,i)=i; }
  star: { o=o; i=i; }
  unit: i;
}
"#;

    #[test]
    fn parses_the_two_document() {
        let doc = parse_document(TWO).unwrap();
        assert_eq!(doc.lattices.len(), 1);
        assert_eq!(doc.quantales.len(), 1);
        assert_eq!(doc.quantales[0].unit.as_deref(), Some("i"));
        assert_eq!(doc.quantales[0].mult.default.as_deref(), Some("o"));
    }

    #[test]
    fn print_parse_round_trip() {
        let doc = parse_document(TWO).unwrap();
        let printed = print_document(&doc);
        let reparsed = parse_document(&printed).unwrap();
        assert_eq!(doc, reparsed);
    }

    #[test]
    fn order_form_parses() {
        let text = r#"
suplattice c3 {
  elements: [z, m, t];
  order: { z<=m; m<=t; }
}
"#;
        let doc = parse_document(text).unwrap();
        match &doc.lattices[0].body {
            LatticeBody::Order(pairs) => assert_eq!(pairs.len(), 2),
            other => panic!("expected order body, got {other:?}"),
        }
        let printed = print_document(&doc);
        assert_eq!(parse_document(&printed).unwrap(), doc);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_document("suplattice x { elements [a]; }").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 1);
        assert!(err.message.contains("Colon"));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let text = "suplattice x { elements: [a]; join: { (a,a)=a; } }\nsuplattice x { elements: [a]; join: { (a,a)=a; } }";
        let err = parse_document(text).unwrap_err();
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn module_without_inner_parses() {
        let text = r#"
module m {
  quantale: two;
  lattice: two;
  side: right;
  action: { (o,o)=o; (o,i)=o; (i,o)=o; (i,i)=i; }
}
"#;
        let doc = parse_document(text).unwrap();
        assert!(doc.modules[0].inner.is_none());
    }
}
