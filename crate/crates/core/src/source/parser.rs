//! Recursive-descent parser for the Java-like source subset.
//!
//! ```text
//! unit        := { class-decl }
//! class-decl  := "class" Name [ "extends" Name ] [ "implements" Name { "," Name } ]
//!                "{" { member } "}"
//! member      := { modifier } ( field | method | constructor )
//! field       := Type Name ";"
//! method      := Type Name "(" params ")" block
//! constructor := ClassName "(" params ")" block
//! params      := [ Type Name { "," Type Name } ]
//! Type        := ( Name | primitive | "void" ) { "[" "]" }
//! ```
//!
//! Blocks are brace-matched and then scanned for invocations, field accesses
//! and local declarations rather than parsed statement by statement.

use std::collections::{BTreeSet, HashMap};

use super::lexer::{Token, TokenKind};
use crate::error::{Error, Result};
use crate::model::{base_type, is_primitive, ClassInfo, FieldInfo, Invocation, MethodInfo, Superclass};

const MODIFIERS: &[&str] = &["public", "private", "protected", "static", "final", "abstract"];

/// Parses one file's tokens into its classes. Superclasses come back as
/// `Superclass::InModel`; resolution to external parents happens when the
/// model is assembled.
pub fn parse_unit(tokens: &[Token], file: &str) -> Result<Vec<ClassInfo>> {
    let mut p = Parser {
        tokens,
        pos: 0,
        file,
    };
    let mut classes = Vec::new();
    while !p.at_end() {
        classes.push(p.class_decl()?);
    }
    Ok(classes)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    file: &'a str,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + offset)
    }

    fn error(&self, expected: &str) -> Error {
        let (line, column) = match self.peek() {
            Some(t) => (t.line, t.column),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.column + t.text.chars().count()))
                .unwrap_or((1, 1)),
        };
        Error::Parse {
            file: self.file.to_owned(),
            line,
            column,
            expected: expected.to_owned(),
        }
    }

    fn expect_punct(&mut self, text: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t.is_punct(text) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(&format!("'{text}'"))),
        }
    }

    fn expect_keyword(&mut self, text: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t.is_keyword(text) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(&format!("'{text}'"))),
        }
    }

    fn eat_punct(&mut self, text: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(text)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, text: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_keyword(text)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn name(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Ok(t.text.clone())
            }
            _ => Err(self.error(what)),
        }
    }

    fn type_name(&mut self, what: &str) -> Result<String> {
        let mut ty = match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => t.text.clone(),
            Some(t) if t.kind == TokenKind::Keyword && is_primitive(&t.text) => t.text.clone(),
            _ => return Err(self.error(what)),
        };
        self.pos += 1;
        while self.peek().is_some_and(|t| t.is_punct("["))
            && self.peek_at(1).is_some_and(|t| t.is_punct("]"))
        {
            self.pos += 2;
            ty.push_str("[]");
        }
        Ok(ty)
    }

    fn class_decl(&mut self) -> Result<ClassInfo> {
        while self
            .peek()
            .is_some_and(|t| t.kind == TokenKind::Keyword && MODIFIERS.contains(&t.text.as_str()))
        {
            self.pos += 1;
        }
        self.expect_keyword("class")?;
        let mut class = ClassInfo::new(&self.name("class name")?);
        if self.eat_keyword("extends") {
            class.superclass = Superclass::InModel(self.name("superclass name")?);
        }
        if self.eat_keyword("implements") {
            loop {
                class.interfaces.insert(self.name("interface name")?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct("{")?;
        let mut pending = Vec::new();
        while !self.eat_punct("}") {
            if self.at_end() {
                return Err(self.error("'}'"));
            }
            self.member(&mut class, &mut pending)?;
        }
        // Bodies are analysed once every field of the class is known.
        for (mut method, params, body) in pending {
            scan_body(&class, &params, body, &mut method, self.file)?;
            class.methods.push(method);
        }
        Ok(class)
    }

    fn member(
        &mut self,
        class: &mut ClassInfo,
        pending: &mut Vec<(MethodInfo, Vec<(String, String)>, &'a [Token])>,
    ) -> Result<()> {
        while self
            .peek()
            .is_some_and(|t| t.kind == TokenKind::Keyword && MODIFIERS.contains(&t.text.as_str()))
        {
            self.pos += 1;
        }

        let is_ctor = self
            .peek()
            .is_some_and(|t| t.kind == TokenKind::Identifier && t.text == class.name)
            && self.peek_at(1).is_some_and(|t| t.is_punct("("));
        if is_ctor {
            self.pos += 1;
            let params = self.params()?;
            let body = self.block()?;
            let types: Vec<&str> = params.iter().map(|(t, _)| t.as_str()).collect();
            pending.push((MethodInfo::constructor(&class.name, &types), params, body));
            return Ok(());
        }

        let ty = if self.eat_keyword("void") {
            "void".to_owned()
        } else {
            self.type_name("member declaration")?
        };
        let name = self.name("member name")?;
        if self.eat_punct(";") {
            if ty == "void" {
                return Err(self.error("field type"));
            }
            class.fields.push(FieldInfo {
                name,
                type_name: ty,
            });
            return Ok(());
        }
        if !self.peek().is_some_and(|t| t.is_punct("(")) {
            return Err(self.error("';' or '('"));
        }
        let params = self.params()?;
        let body = self.block()?;
        let types: Vec<&str> = params.iter().map(|(t, _)| t.as_str()).collect();
        pending.push((MethodInfo::new(&name, &types, &ty), params, body));
        Ok(())
    }

    fn params(&mut self) -> Result<Vec<(String, String)>> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if self.eat_punct(")") {
            return Ok(params);
        }
        loop {
            let ty = self.type_name("parameter type or ')'")?;
            let name = self.name("parameter name")?;
            params.push((ty, name));
            if self.eat_punct(")") {
                return Ok(params);
            }
            self.expect_punct(",")?;
        }
    }

    /// Consumes a brace-balanced block and returns the tokens inside it.
    fn block(&mut self) -> Result<&'a [Token]> {
        self.expect_punct("{")?;
        let start = self.pos;
        let mut depth = 1usize;
        while let Some(t) = self.peek() {
            if t.is_punct("{") {
                depth += 1;
            } else if t.is_punct("}") {
                depth -= 1;
                if depth == 0 {
                    let body = &self.tokens[start..self.pos];
                    self.pos += 1;
                    return Ok(body);
                }
            }
            self.pos += 1;
        }
        Err(self.error("'}'"))
    }
}

fn is_type_token(t: &Token) -> bool {
    t.kind == TokenKind::Identifier || (t.kind == TokenKind::Keyword && is_primitive(&t.text))
}

fn is_statement_start(prev: Option<&Token>) -> bool {
    match prev {
        None => true,
        Some(t) => t.is_punct("{") || t.is_punct("}") || t.is_punct(";") || t.is_punct("("),
    }
}

/// Index of the `)` matching the `(` at `open`, plus the argument count.
fn call_args(body: &[Token], open: usize, file: &str) -> Result<(usize, usize)> {
    let mut depth = 0usize;
    let mut commas = 0;
    for (i, t) in body.iter().enumerate().skip(open) {
        if t.is_punct("(") || t.is_punct("[") || t.is_punct("{") {
            depth += 1;
        } else if t.is_punct(")") || t.is_punct("]") || t.is_punct("}") {
            depth -= 1;
            if depth == 0 {
                let arity = if i == open + 1 { 0 } else { commas + 1 };
                return Ok((i, arity));
            }
        } else if depth == 1 && t.is_punct(",") {
            commas += 1;
        }
    }
    Err(Error::Parse {
        file: file.to_owned(),
        line: body[open].line,
        column: body[open].column,
        expected: "')'".to_owned(),
    })
}

/// Index of the `(` matching the `)` at `close`.
fn matching_open(body: &[Token], close: usize) -> Option<usize> {
    let mut depth = 0usize;
    for i in (0..=close).rev() {
        let t = &body[i];
        if t.is_punct(")") {
            depth += 1;
        } else if t.is_punct("(") {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}

fn scan_body(
    class: &ClassInfo,
    params: &[(String, String)],
    body: &[Token],
    method: &mut MethodInfo,
    file: &str,
) -> Result<()> {
    let fields: HashMap<&str, &str> = class
        .fields
        .iter()
        .map(|f| (f.name.as_str(), f.type_name.as_str()))
        .collect();
    let mut locals: HashMap<String, String> = params.iter().map(|(t, n)| (n.clone(), t.clone())).collect();
    let superclass = class.superclass.name();

    let mut refs: BTreeSet<String> = BTreeSet::new();
    let add_ref = |refs: &mut BTreeSet<String>, ty: &str| {
        let ty = base_type(ty);
        if !is_primitive(ty) {
            refs.insert(ty.to_owned());
        }
    };
    add_ref(&mut refs, &method.return_type);
    for (ty, _) in params {
        add_ref(&mut refs, ty);
    }

    let mut calls: BTreeSet<Invocation> = BTreeSet::new();
    let mut uses: BTreeSet<String> = BTreeSet::new();
    // Declared type of the current statement and the paren depth it was declared at.
    let mut decl_type: Option<(String, usize)> = None;
    let mut depth = 0usize;

    let tok = |i: usize| body.get(i);
    let mut i = 0;
    while i < body.len() {
        let t = &body[i];
        let prev = if i == 0 { None } else { Some(&body[i - 1]) };

        if t.is_punct(";") {
            decl_type = None;
        } else if t.is_punct("(") {
            depth += 1;
        } else if t.is_punct(")") {
            depth = depth.saturating_sub(1);
        }

        // Local declaration: Type {[]} Name followed by = ; , :
        if is_type_token(t) && is_statement_start(prev) {
            let mut j = i + 1;
            let mut ty = t.text.clone();
            while tok(j).is_some_and(|t| t.is_punct("[")) && tok(j + 1).is_some_and(|t| t.is_punct("]")) {
                ty.push_str("[]");
                j += 2;
            }
            let is_decl = tok(j).is_some_and(|n| n.kind == TokenKind::Identifier)
                && tok(j + 1).is_some_and(|n| {
                    n.is_punct("=") || n.is_punct(";") || n.is_punct(",") || n.is_punct(":")
                });
            if is_decl {
                add_ref(&mut refs, &ty);
                locals.insert(body[j].text.clone(), ty.clone());
                decl_type = Some((ty, depth));
                i = j + 1;
                continue;
            }
        }

        // Further declarators of the same statement: `int a = 1, b;`
        if t.kind == TokenKind::Identifier
            && prev.is_some_and(|p| p.is_punct(","))
            && tok(i + 1).is_some_and(|n| n.is_punct("=") || n.is_punct(";") || n.is_punct(","))
        {
            if let Some((ty, _)) = decl_type.as_ref().filter(|(_, d)| *d == depth) {
                locals.insert(t.text.clone(), ty.clone());
                i += 1;
                continue;
            }
        }

        if t.is_keyword("new") {
            if let Some(ty) = tok(i + 1).filter(|n| is_type_token(n)) {
                add_ref(&mut refs, &ty.text);
                if tok(i + 2).is_some_and(|n| n.is_punct("(")) {
                    let (_, arity) = call_args(body, i + 2, file)?;
                    if !is_primitive(&ty.text) {
                        calls.insert(Invocation::new(Some(&ty.text), &ty.text, arity));
                    }
                }
                i += 2;
                continue;
            }
        }

        // super(...) / this(...) constructor chaining
        if (t.is_keyword("super") || t.is_keyword("this"))
            && tok(i + 1).is_some_and(|n| n.is_punct("("))
            && !prev.is_some_and(|p| p.is_punct("."))
        {
            let (_, arity) = call_args(body, i + 1, file)?;
            let target = if t.is_keyword("super") { superclass } else { Some(class.name.as_str()) };
            if let Some(target) = target {
                calls.insert(Invocation::new(Some(target), target, arity));
            }
            i += 1;
            continue;
        }

        if t.kind == TokenKind::Identifier {
            let after_dot = prev.is_some_and(|p| p.is_punct("."));
            let before_paren = tok(i + 1).is_some_and(|n| n.is_punct("("));

            if before_paren {
                let (_, arity) = call_args(body, i + 1, file)?;
                let receiver = if after_dot {
                    receiver_type(body, i - 1, class, &fields, &locals)
                } else {
                    Some(class.name.clone())
                };
                if let Some(r) = &receiver {
                    add_ref(&mut refs, r);
                }
                calls.insert(Invocation {
                    receiver: receiver.map(|r| base_type(&r).to_owned()),
                    method: t.text.clone(),
                    arity,
                });
            } else if after_dot {
                let via_this = i >= 2 && body[i - 2].is_keyword("this");
                if via_this && fields.contains_key(t.text.as_str()) {
                    uses.insert(t.text.clone());
                }
            } else if !locals.contains_key(&t.text) && fields.contains_key(t.text.as_str()) {
                uses.insert(t.text.clone());
            }
        }

        i += 1;
    }

    refs.remove(&class.name);
    method.invocations = calls;
    method.uses_fields = uses;
    method.referenced_types = refs;
    Ok(())
}

/// Static type of the receiver ending just before the `.` at `dot`.
fn receiver_type(
    body: &[Token],
    dot: usize,
    class: &ClassInfo,
    fields: &HashMap<&str, &str>,
    locals: &HashMap<String, String>,
) -> Option<String> {
    let recv = body.get(dot.checked_sub(1)?)?;
    if recv.is_keyword("this") {
        return Some(class.name.clone());
    }
    if recv.is_keyword("super") {
        return class.superclass.name().map(str::to_owned);
    }
    if recv.kind == TokenKind::Identifier {
        let qualified = dot >= 2 && body[dot - 2].is_punct(".");
        if qualified {
            let via_this = dot >= 3 && body[dot - 3].is_keyword("this");
            return if via_this {
                fields.get(recv.text.as_str()).map(|t| t.to_string())
            } else {
                None
            };
        }
        if let Some(ty) = locals.get(&recv.text) {
            return Some(ty.clone());
        }
        return fields.get(recv.text.as_str()).map(|t| t.to_string());
    }
    if recv.is_punct(")") {
        let open = matching_open(body, dot - 1)?;
        if open >= 2 && body[open - 2].is_keyword("new") && body[open - 1].kind == TokenKind::Identifier {
            return Some(body[open - 1].text.clone());
        }
    }
    None
}
