//! Named substitutions shipped with the crate.

use crate::definition::{Definition, SymbolDef};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub definition: Definition,
}

/// `(name, description, symbols with values, images in symbol order)`.
type Row = (&'static str, &'static str, &'static [(char, f64)], &'static [&'static str]);

const ROWS: &[Row] = &[
    ("fibonacci", "a -> ab, b -> a", &[('a', 1.0), ('b', -1.0)], &["ab", "a"]),
    ("thue-morse", "a -> ab, b -> ba", &[('a', 1.0), ('b', -1.0)], &["ab", "ba"]),
    ("period-doubling", "a -> ab, b -> aa", &[('a', 1.0), ('b', -1.0)], &["ab", "aa"]),
    ("remark1b", "0 -> 10, 1 -> 1: finite and infinite words disagree", &[('0', 0.0), ('1', 1.0)], &["10", "1"]),
    ("remarkc", "0 -> 101, 1 -> 1: not minimal", &[('0', 0.0), ('1', 1.0)], &["101", "1"]),
    ("minimal-nonprimitive", "a -> abaa, b -> b", &[('a', 1.0), ('b', -1.0)], &["abaa", "b"]),
    ("form51", "0 -> 0100, 1 -> 1: S(0) = 0 1^k 0 w 0", &[('0', 0.0), ('1', 1.0)], &["0100", "1"]),
    ("form52", "0 -> 00110, 1 -> 1: S(0) = 0 0 w 0", &[('0', 0.0), ('1', 1.0)], &["00110", "1"]),
    ("zero-potential", "a -> ab, b -> a with both values 0", &[('a', 0.0), ('b', 0.0)], &["ab", "a"]),
    ("doubling", "a -> aa: the one-point subshift", &[('a', 0.0)], &["aa"]),
    ("no-aa", "a -> ababba, b -> b: S(a) avoids aa", &[('a', 1.0), ('b', -1.0)], &["ababba", "b"]),
    ("periodic-aba", "a -> aba, b -> b: periodic", &[('a', 1.0), ('b', -1.0)], &["aba", "b"]),
];

fn entry(row: &Row) -> CatalogEntry {
    let (name, description, symbols, images) = *row;
    let alphabet: Vec<SymbolDef> =
        symbols.iter().map(|&(c, value)| SymbolDef { symbol: c.to_string(), value }).collect();
    let rules = symbols.iter().zip(images.iter()).map(|(&(c, _), img)| (c.to_string(), img.to_string())).collect();
    let allow_equal_values = symbols.iter().enumerate().any(|(i, s)| symbols[..i].iter().any(|t| t.1 == s.1));
    CatalogEntry {
        name,
        description,
        definition: Definition {
            name: name.to_string(),
            alphabet,
            rules,
            potential_coupling: None,
            allow_equal_values,
        },
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    ROWS.iter().map(entry).collect()
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    ROWS.iter().find(|r| r.0 == name).map(entry)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    ROWS.iter().map(|r| r.0)
}
