//! Deterministic random MiniOO program generator.
//!
//! Generated programs are always parseable, keep every statement on its own
//! line with braced control bodies (so line-based instrumentation stays
//! valid), and never shadow a field with a local or parameter (so the
//! token-scan def/use oracle applies). Field, local, and parameter names
//! come from disjoint pools.

/// SplitMix64; deterministic per seed.
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n.max(1) as u64) as usize
    }

    pub fn chance(&mut self, pct: usize) -> bool {
        self.below(100) < pct
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Ty {
    Int,
    Str,
    Class(usize),
}

struct MethodSpec {
    name: String,
    params: Vec<(String, Ty)>,
    returns_int: bool,
}

struct ClassSpec {
    name: String,
    base: Option<usize>,
    own_fields: Vec<String>,
    eff_fields: Vec<String>,
    /// Parameter types of each declared constructor.
    ctors: Vec<Vec<Ty>>,
    methods: Vec<MethodSpec>,
}

impl ClassSpec {
    /// Instantiable with int/string literals only.
    fn simple(&self) -> bool {
        self.ctors.is_empty() || self.ctors.iter().any(|c| c.iter().all(|t| !matches!(t, Ty::Class(_))))
    }

    fn simple_ctor(&self) -> Option<&Vec<Ty>> {
        self.ctors.iter().find(|c| c.iter().all(|t| !matches!(t, Ty::Class(_))))
    }
}

const CLASS_NAMES: &[&str] = &["Alpha", "Beta", "Gamma", "Delta"];

/// Generate one random MiniOO program. The same seed yields the same text.
pub fn gen_program(seed: u64) -> String {
    let mut rng = Rng::new(seed.wrapping_mul(2).wrapping_add(1));
    let n_classes = 1 + rng.below(CLASS_NAMES.len());

    let mut fld_counter = 0usize;
    let mut m_counter = 0usize;
    let mut classes: Vec<ClassSpec> = Vec::new();

    for (i, class_name) in CLASS_NAMES.iter().enumerate().take(n_classes) {
        let base = if i > 0 && rng.chance(30) { Some(rng.below(i)) } else { None };
        let mut own_fields = Vec::new();
        for _ in 0..rng.below(4) {
            own_fields.push(format!("fld{fld_counter}"));
            fld_counter += 1;
        }
        let mut eff_fields = base.map(|b| classes[b].eff_fields.clone()).unwrap_or_default();
        eff_fields.extend(own_fields.iter().cloned());

        let mut ctors = Vec::new();
        for _ in 0..rng.below(3) {
            let mut params = Vec::new();
            for _ in 0..rng.below(3) {
                let ty = if i > 0 && rng.chance(20) {
                    Ty::Class(rng.below(i))
                } else if rng.chance(20) {
                    Ty::Str
                } else {
                    Ty::Int
                };
                params.push(ty);
            }
            ctors.push(params);
        }

        let mut methods = Vec::new();
        for _ in 0..1 + rng.below(5) {
            let mut params = Vec::new();
            for p in 0..rng.below(4) {
                let ty = if n_classes > 0 && rng.chance(30) {
                    Ty::Class(rng.below(n_classes))
                } else if rng.chance(15) {
                    Ty::Str
                } else {
                    Ty::Int
                };
                params.push((format!("p{p}"), ty));
            }
            methods.push(MethodSpec {
                name: format!("m{m_counter}"),
                params,
                returns_int: rng.chance(40),
            });
            m_counter += 1;
        }

        classes.push(ClassSpec { name: class_name.to_string(), base, own_fields, eff_fields, ctors, methods });
    }

    let mut w = Writer::default();
    for i in 0..classes.len() {
        emit_class(&mut w, &classes, i, &mut rng);
        if i + 1 < classes.len() && rng.chance(60) {
            w.blank();
        }
    }

    let text = w.lines.join("\n") + "\n";
    if rng.chance(10) {
        text.replace('\n', "\r\n")
    } else {
        text
    }
}

#[derive(Default)]
struct Writer {
    lines: Vec<String>,
    indent: usize,
}

impl Writer {
    fn line(&mut self, s: impl AsRef<str>) {
        self.lines.push(format!("{}{}", "\t".repeat(self.indent), s.as_ref()));
    }

    fn blank(&mut self) {
        self.lines.push(String::new());
    }
}

fn ty_name(ty: Ty, classes: &[ClassSpec]) -> String {
    match ty {
        Ty::Int => "int".to_string(),
        Ty::Str => "string".to_string(),
        Ty::Class(i) => classes[i].name.clone(),
    }
}

fn emit_class(w: &mut Writer, classes: &[ClassSpec], idx: usize, rng: &mut Rng) {
    let class = &classes[idx];
    match class.base {
        Some(b) => w.line(format!("class {}:{}", class.name, classes[b].name)),
        None => w.line(format!("class {}", class.name)),
    }
    w.line("{");
    w.indent += 1;

    if !class.own_fields.is_empty() {
        // Split the fields into a few declaration lines, sometimes with
        // several declarators per line.
        let mut remaining = class.own_fields.as_slice();
        while !remaining.is_empty() {
            let take = 1 + rng.below(remaining.len().min(3));
            let modifier = if rng.chance(60) { "private " } else { "public " };
            w.line(format!("{modifier}int {};", remaining[..take].join(", ")));
            remaining = &remaining[take..];
        }
    }

    for ctor in &class.ctors {
        if rng.chance(25) {
            w.blank();
        }
        let params: Vec<String> = ctor
            .iter()
            .enumerate()
            .map(|(i, t)| format!("{} c{i}", ty_name(*t, classes)))
            .collect();
        w.line(format!("public {}({})", class.name, params.join(", ")));
        w.line("{");
        w.indent += 1;
        let param_scope: Vec<(String, Ty)> =
            ctor.iter().enumerate().map(|(i, t)| (format!("c{i}"), *t)).collect();
        emit_body(w, classes, idx, &param_scope, false, rng, 0);
        w.indent -= 1;
        w.line("}");
    }

    for m in &class.methods {
        if rng.chance(25) {
            w.blank();
        }
        if rng.chance(15) {
            w.line(format!("// helper {}", m.name));
        }
        let params: Vec<String> =
            m.params.iter().map(|(n, t)| format!("{} {n}", ty_name(*t, classes))).collect();
        let modifier = match rng.below(3) {
            0 => "public ",
            1 => "private ",
            _ => "",
        };
        let ret = if m.returns_int { "int" } else { "void" };
        w.line(format!("{modifier}{ret} {}({})", m.name, params.join(", ")));
        w.line("{");
        w.indent += 1;
        emit_body(w, classes, idx, &m.params, m.returns_int, rng, 0);
        w.indent -= 1;
        w.line("}");
    }

    w.indent -= 1;
    w.line("}");
}

struct BodyCtx {
    int_vars: Vec<String>,
    obj_vars: Vec<(String, usize)>,
    next_local: usize,
}

fn emit_body(
    w: &mut Writer,
    classes: &[ClassSpec],
    class_idx: usize,
    params: &[(String, Ty)],
    returns_int: bool,
    rng: &mut Rng,
    depth: usize,
) {
    let mut ctx = BodyCtx { int_vars: Vec::new(), obj_vars: Vec::new(), next_local: 0 };
    for (name, ty) in params {
        match ty {
            Ty::Int => ctx.int_vars.push(name.clone()),
            Ty::Class(i) => ctx.obj_vars.push((name.clone(), *i)),
            Ty::Str => {}
        }
    }
    let n = rng.below(6);
    for _ in 0..n {
        emit_stmt(w, classes, class_idx, &mut ctx, rng, depth);
    }
    if returns_int && rng.chance(70) {
        w.line(format!("return {};", int_expr(classes, class_idx, &ctx, rng)));
    }
}

fn int_atom(classes: &[ClassSpec], class_idx: usize, ctx: &BodyCtx, rng: &mut Rng) -> String {
    let fields = &classes[class_idx].eff_fields;
    match rng.below(3) {
        0 if !fields.is_empty() => fields[rng.below(fields.len())].clone(),
        1 if !ctx.int_vars.is_empty() => ctx.int_vars[rng.below(ctx.int_vars.len())].clone(),
        _ => format!("{}", rng.below(100)),
    }
}

fn int_expr(classes: &[ClassSpec], class_idx: usize, ctx: &BodyCtx, rng: &mut Rng) -> String {
    let mut out = int_atom(classes, class_idx, ctx, rng);
    for _ in 0..rng.below(3) {
        let op = ["+", "-", "*"][rng.below(3)];
        out = format!("{out} {op} {}", int_atom(classes, class_idx, ctx, rng));
    }
    out
}

fn new_expr(classes: &[ClassSpec], target: usize, rng: &mut Rng) -> Option<String> {
    let class = &classes[target];
    if !class.simple() {
        return None;
    }
    let args: Vec<String> = match class.simple_ctor() {
        None => Vec::new(),
        Some(ctor) => ctor
            .iter()
            .map(|t| match t {
                Ty::Int => format!("{}", rng.below(10)),
                Ty::Str => "\"s\"".to_string(),
                Ty::Class(_) => unreachable!("simple ctor has no class params"),
            })
            .collect(),
    };
    Some(format!("new {}({})", class.name, args.join(", ")))
}

/// Arguments for calling `method`, or None when a class-typed parameter
/// cannot be satisfied from scope.
fn call_args(
    classes: &[ClassSpec],
    class_idx: usize,
    method: &MethodSpec,
    ctx: &BodyCtx,
    rng: &mut Rng,
) -> Option<String> {
    let mut args = Vec::new();
    for (_, ty) in &method.params {
        match ty {
            Ty::Int => args.push(int_atom(classes, class_idx, ctx, rng)),
            Ty::Str => args.push("\"a\"".to_string()),
            Ty::Class(want) => {
                let candidate = ctx.obj_vars.iter().find(|(_, c)| c == want)?;
                args.push(candidate.0.clone());
            }
        }
    }
    Some(args.join(", "))
}

fn emit_stmt(
    w: &mut Writer,
    classes: &[ClassSpec],
    class_idx: usize,
    ctx: &mut BodyCtx,
    rng: &mut Rng,
    depth: usize,
) {
    let fields = &classes[class_idx].eff_fields;
    match rng.below(10) {
        0 => {
            let name = format!("loc{}", ctx.next_local);
            ctx.next_local += 1;
            if rng.chance(60) {
                w.line(format!("int {name} = {};", int_expr(classes, class_idx, ctx, rng)));
            } else {
                w.line(format!("int {name};"));
            }
            ctx.int_vars.push(name);
        }
        1 => {
            let target = rng.below(classes.len());
            if let Some(init) = new_expr(classes, target, rng) {
                let name = format!("loc{}", ctx.next_local);
                ctx.next_local += 1;
                w.line(format!("{} {name} = {init};", classes[target].name));
                ctx.obj_vars.push((name, target));
            }
        }
        2 | 3 => {
            if !fields.is_empty() {
                let fld = &fields[rng.below(fields.len())];
                if rng.chance(20) {
                    w.line(format!("this.{fld} = {};", int_expr(classes, class_idx, ctx, rng)));
                } else {
                    w.line(format!("{fld} = {};", int_expr(classes, class_idx, ctx, rng)));
                }
            } else if !ctx.int_vars.is_empty() {
                let v = ctx.int_vars[rng.below(ctx.int_vars.len())].clone();
                w.line(format!("{v} = {};", int_expr(classes, class_idx, ctx, rng)));
            }
        }
        4 => {
            if !fields.is_empty() && rng.chance(70) {
                let fld = &fields[rng.below(fields.len())];
                if rng.chance(50) {
                    w.line(format!("++{fld};"));
                } else {
                    w.line(format!("{fld}++;"));
                }
            } else if !ctx.int_vars.is_empty() {
                let v = ctx.int_vars[rng.below(ctx.int_vars.len())].clone();
                w.line(format!("--{v};"));
            }
        }
        5 => {
            // Same-class call through `this`.
            let methods = &classes[class_idx].methods;
            if !methods.is_empty() {
                let m = &methods[rng.below(methods.len())];
                if let Some(args) = call_args(classes, class_idx, m, ctx, rng) {
                    w.line(format!("this.{}({args});", m.name));
                }
            }
        }
        6 => {
            // Cross-object call on a local or parameter.
            if !ctx.obj_vars.is_empty() {
                let (var, target) = ctx.obj_vars[rng.below(ctx.obj_vars.len())].clone();
                let methods = &classes[target].methods;
                if !methods.is_empty() {
                    let m = &methods[rng.below(methods.len())];
                    if let Some(args) = call_args(classes, class_idx, m, ctx, rng) {
                        w.line(format!("{var}.{}({args});", m.name));
                    }
                }
            }
        }
        7 => {
            if rng.chance(50) {
                w.line(format!(
                    "Console.WriteLine(\"v {{0}}\", {});",
                    int_atom(classes, class_idx, ctx, rng)
                ));
            } else {
                w.line("Console.Write(\"t\");");
            }
        }
        8 if depth < 2 => {
            w.line(format!(
                "if ({} > {}) {{",
                int_atom(classes, class_idx, ctx, rng),
                rng.below(50)
            ));
            w.indent += 1;
            let inner = 1 + rng.below(2);
            for _ in 0..inner {
                emit_stmt(w, classes, class_idx, ctx, rng, depth + 1);
            }
            w.indent -= 1;
            if rng.chance(40) {
                w.line("} else {");
                w.indent += 1;
                emit_stmt(w, classes, class_idx, ctx, rng, depth + 1);
                w.indent -= 1;
            }
            w.line("}");
        }
        9 if depth < 2 => {
            w.line(format!(
                "while ({} < {}) {{",
                int_atom(classes, class_idx, ctx, rng),
                rng.below(20)
            ));
            w.indent += 1;
            emit_stmt(w, classes, class_idx, ctx, rng, depth + 1);
            w.indent -= 1;
            w.line("}");
        }
        _ => {
            if rng.chance(30) {
                w.line(format!("// step {}", rng.below(1000)));
            }
        }
    }
}
