use num_bigint::BigInt;

use nilpotent::format::{
    format_matrix, format_nilpotent_presentation, format_rows, parse_document, Document,
    SubgroupGenerator,
};
use nilpotent::{
    centralizer as centralizer_of, conjugacy, extgcd_bounded, full_form, kernel_and_preimage,
    membership_witness, normal_form, power_problem, subgroup_presentation, torsion_bound,
    ConjugacyAnswer, CoordinateMatrix, Coords, Error, ExpWord, HomSpec, MalcevGroup, PowerAnswer,
    QuotientPresentation, DEFAULT_WORD_CAP,
};

pub struct Outcome {
    pub yes: bool,
    pub text: String,
}

impl Outcome {
    fn answer(text: String) -> Self {
        Outcome { yes: true, text }
    }

    fn no() -> Self {
        Outcome {
            yes: false,
            text: "no\n".into(),
        }
    }
}

fn msg(e: Error) -> String {
    e.to_string()
}

pub struct Context {
    doc: Document,
    group: QuotientPresentation,
}

impl Context {
    pub fn load(text: &str, verbose: bool, log: &mut String) -> Result<Self, String> {
        let doc = parse_document(text).map_err(msg)?;
        let group = doc.group.presentation().map_err(msg)?;
        if verbose {
            let torsion: Vec<String> = group
                .torsion()
                .iter()
                .map(|&i| format!("a{}:{}", i + 1, group.order(i).unwrap()))
                .collect();
            log.push_str(&format!(
                "group c={} r={} m={} torsion=[{}]\n",
                group.c(),
                group.r(),
                group.m(),
                torsion.join(" ")
            ));
        }
        Ok(Context { doc, group })
    }

    fn element(&self, w: &ExpWord) -> Result<Coords, String> {
        normal_form(&self.group, w).map_err(msg)
    }

    fn words(&self, n: usize) -> Result<Vec<Coords>, String> {
        if self.doc.words.len() != n {
            return Err(format!(
                "expected {n} `word` line{}, found {}",
                if n == 1 { "" } else { "s" },
                self.doc.words.len()
            ));
        }
        self.doc.words.iter().map(|w| self.element(w)).collect()
    }

    fn subgroup(&self) -> Result<Vec<Coords>, String> {
        let gens = self
            .doc
            .subgroup
            .as_ref()
            .ok_or("input has no `subgroup` section")?;
        gens.iter()
            .map(|g| match g {
                SubgroupGenerator::Row(r) => Ok(self.group.reduce(r)),
                SubgroupGenerator::Word(w) => self.element(w),
            })
            .collect()
    }

    fn homomorphism(&self) -> Result<(QuotientPresentation, Vec<Coords>, Vec<Coords>), String> {
        let target = self
            .doc
            .target
            .as_ref()
            .ok_or("input has no `target` group")?
            .presentation()
            .map_err(msg)?;
        let mut domain = Vec::new();
        let mut images = Vec::new();
        for (from, to) in &self.doc.maps {
            domain.push(self.element(from)?);
            images.push(normal_form(&target, to).map_err(msg)?);
        }
        Ok((target, domain, images))
    }
}

pub fn nf(ctx: &Context) -> Result<Outcome, String> {
    let mut text = String::new();
    for w in &ctx.doc.words {
        text.push_str(&format!("{}\n", ctx.element(w)?));
    }
    Ok(Outcome::answer(text))
}

pub fn wp(ctx: &Context) -> Result<Outcome, String> {
    let x = ctx.words(1)?.remove(0);
    Ok(if x.is_identity() {
        Outcome::answer("yes\n".into())
    } else {
        Outcome::no()
    })
}

/// Prints `yes`, the exponents over the full-form sequence and, when
/// tracking, the element as a word in the subgroup generators.
pub fn member(ctx: &Context, track: bool) -> Result<Outcome, String> {
    let gens = ctx.subgroup()?;
    let h = ctx.words(1)?.remove(0);
    let form = full_form(&ctx.group, &CoordinateMatrix::new(gens), track).map_err(msg)?;
    match membership_witness(&ctx.group, &form, &h, DEFAULT_WORD_CAP).map_err(msg)? {
        None => Ok(Outcome::no()),
        Some(w) => {
            let mut text = format!("yes\n{}\n", Coords::new(w.gamma));
            if let Some(word) = w.word {
                text.push_str(&format!("{word}\n"));
            }
            Ok(Outcome::answer(text))
        }
    }
}

pub fn fullform(ctx: &Context, track: bool) -> Result<Outcome, String> {
    let form =
        full_form(&ctx.group, &CoordinateMatrix::new(ctx.subgroup()?), track).map_err(msg)?;
    let mut text = format_matrix(&form.matrix);
    if let Some(exprs) = &form.expressions {
        text.push_str("expressions\n");
        for e in exprs {
            text.push_str(&format!("{}\n", e.to_word(DEFAULT_WORD_CAP).map_err(msg)?));
        }
    }
    Ok(Outcome::answer(text))
}

pub fn subpresent(ctx: &Context) -> Result<Outcome, String> {
    let sp = subgroup_presentation(&ctx.group, &ctx.subgroup()?).map_err(msg)?;
    let mut text = format_matrix(&sp.generators);
    text.push_str(&format_nilpotent_presentation(&sp.presentation));
    Ok(Outcome::answer(text))
}

pub fn quotpres(ctx: &Context) -> Result<Outcome, String> {
    Ok(Outcome::answer(format_matrix(ctx.group.relators())))
}

pub fn kernel(ctx: &Context) -> Result<Outcome, String> {
    let (target, domain, images) = ctx.homomorphism()?;
    let spec = HomSpec {
        source: &ctx.group,
        target: &target,
        domain: &domain,
        images: &images,
    };
    let k = kernel_and_preimage(&spec, None).map_err(msg)?;
    Ok(Outcome::answer(format_rows(&k.generators)))
}

pub fn preimage(ctx: &Context) -> Result<Outcome, String> {
    let (target, domain, images) = ctx.homomorphism()?;
    let [w] = ctx.doc.images.as_slice() else {
        return Err(format!(
            "expected 1 `image` line, found {}",
            ctx.doc.images.len()
        ));
    };
    let h = normal_form(&target, w).map_err(msg)?;
    let spec = HomSpec {
        source: &ctx.group,
        target: &target,
        domain: &domain,
        images: &images,
    };
    let k = kernel_and_preimage(&spec, Some(&h)).map_err(msg)?;
    Ok(Outcome::answer(format!("{}\n", k.preimage.unwrap())))
}

pub fn centralizer(ctx: &Context) -> Result<Outcome, String> {
    let g = ctx.words(1)?.remove(0);
    let gens = centralizer_of(&ctx.group, &g).map_err(msg)?;
    Ok(Outcome::answer(format_rows(&gens)))
}

/// Prints `yes` and a conjugator `u` with `g = u^-1 h u`, as a word.
pub fn conj(ctx: &Context) -> Result<Outcome, String> {
    let w = ctx.words(2)?;
    match conjugacy(&ctx.group, &w[0], &w[1]).map_err(msg)? {
        ConjugacyAnswer::NotConjugate => Ok(Outcome::no()),
        ConjugacyAnswer::Conjugate(u) => Ok(Outcome::answer(format!(
            "yes\n{}\n",
            ExpWord::from_coords(&u)
        ))),
    }
}

pub fn power(ctx: &Context, prog: Option<(&BigInt, &BigInt)>) -> Result<Outcome, String> {
    let w = ctx.words(2)?;
    match power_problem(&ctx.group, &w[0], &w[1], prog).map_err(msg)? {
        PowerAnswer::NoPower => Ok(Outcome::no()),
        PowerAnswer::Power(k) => Ok(Outcome::answer(format!("yes\n{k}\n"))),
    }
}

pub fn extgcd(values: &[BigInt]) -> Outcome {
    let (g, x, _) = extgcd_bounded(values);
    Outcome::answer(format!("{g}\n{}\n", Coords::new(x)))
}

pub fn torsionbound(ctx: &Context) -> Result<Outcome, String> {
    Ok(Outcome::answer(format!("{}\n", torsion_bound(&ctx.group))))
}
