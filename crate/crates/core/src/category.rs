//! Higher-level categories with black strands and red strands labelled by pin
//! labels: shuffle objects, canonical crossing diagrams, the collapsing functor
//! to the affine algebra, composition by transport through it, and an
//! independent diagram rewriter.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::One;

use crate::error::{Error, Result};
use crate::frobenius::{Elem, FrobeniusAlgebra};
use crate::perm::{self, Perm};
use crate::poly::{PinLabel, PolyAlg, PolyElement, Variant};
use crate::rational::Q;
use crate::wreath::{WreathAlg, WreathElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Black,
    /// Red strand carrying the `r`-th pin label (0-based).
    Red(usize),
}

pub type ObjectWord = Vec<Slot>;

pub fn fmt_object(w: &[Slot]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|s| match s {
            Slot::Black => ".".to_string(),
            Slot::Red(r) => format!("Q{}", r + 1),
        })
        .collect();
    format!("[{}]", parts.join(" "))
}

fn black_count(w: &[Slot]) -> usize {
    w.iter().filter(|s| **s == Slot::Black).count()
}

fn black_index(w: &[Slot], slot: usize) -> usize {
    black_count(&w[..slot])
}

fn reds(w: &[Slot]) -> Vec<usize> {
    w.iter()
        .filter_map(|s| match s {
            Slot::Red(r) => Some(*r),
            Slot::Black => None,
        })
        .collect()
}

/// All interleavings of `d` black slots with the red word, in lexicographic order (black first).
pub fn shuffles(d: usize, ell: usize) -> Vec<ObjectWord> {
    fn rec(b: usize, r: usize, ell: usize, cur: &mut ObjectWord, out: &mut Vec<ObjectWord>) {
        if b == 0 && r == ell {
            out.push(cur.clone());
            return;
        }
        if b > 0 {
            cur.push(Slot::Black);
            rec(b - 1, r, ell, cur, out);
            cur.pop();
        }
        if r < ell {
            cur.push(Slot::Red(r));
            rec(b, r + 1, ell, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, 0, ell, &mut Vec::new(), &mut out);
    out
}

/// Elementary generating morphisms, positioned by 0-based slot.
#[derive(Clone, Debug, PartialEq)]
pub enum Gen {
    Token(usize, Elem),
    Dot(usize),
    InvDot(usize),
    /// Black-black crossing (positive in the quantum case).
    Cross(usize),
    /// Negative black-black crossing (quantum only).
    NegCross(usize),
    /// Red-black crossing whose black strand moves right: slots `(black, red)` become `(red, black)`.
    XRB(usize),
    /// Red-black crossing whose black strand moves left: slots `(red, black)` become `(black, red)`.
    XBR(usize),
}

impl Gen {
    pub fn slot(&self) -> usize {
        match self {
            Gen::Token(p, _) | Gen::Dot(p) | Gen::InvDot(p) | Gen::Cross(p) | Gen::NegCross(p) | Gen::XRB(p) | Gen::XBR(p) => *p,
        }
    }
}

/// A layer of the rewriter: a polynomial on the black strands, or an elementary crossing.
#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Layer(PolyElement),
    Cross(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub src: ObjectWord,
    pub tgt: ObjectWord,
    /// Coefficients `a x^alpha` of each `sigma_{tgt, w, src}`, keyed through the permutation slot.
    pub body: WreathElement,
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", fmt_object(&self.src), fmt_object(&self.tgt))
    }
}

type CanonKey = (ObjectWord, ObjectWord, Perm);
type CrossKey = (ObjectWord, ObjectWord, Perm, usize);

/// An algebra, a list of pin labels, a black strand count and a variant.
pub struct Session {
    pub wa: WreathAlg,
    pub labels: Vec<PinLabel>,
    pub d: usize,
    /// `pins[r][k]`: label `r` on black strand `k`.
    pins: Vec<Vec<PolyElement>>,
    phi_cache: Mutex<HashMap<CanonKey, WreathElement>>,
    cross_cache: Mutex<HashMap<CrossKey, BTreeMap<Perm, PolyElement>>>,
}

impl fmt::Debug for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Session")
            .field("algebra", &self.wa.alg().name)
            .field("d", &self.d)
            .field("levels", &self.labels.len())
            .field("variant", &self.wa.variant())
            .finish()
    }
}

impl Session {
    pub fn new(alg: Arc<FrobeniusAlgebra>, d: usize, variant: Variant, z: Q, labels: Vec<PinLabel>) -> Result<Self> {
        let wa = WreathAlg::new(alg, d, variant, z)?;
        for l in &labels {
            if l.element.n != 1 || l.element.variant != variant {
                return Err(Error::WrongVariant("pin label does not match the session variant".into()));
            }
        }
        let pins = labels
            .iter()
            .map(|l| (0..d).map(|k| wa.poly.embed(&l.element, k)).collect())
            .collect();
        Ok(Session {
            wa,
            labels,
            d,
            pins,
            phi_cache: Mutex::new(HashMap::new()),
            cross_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn variant(&self) -> Variant {
        self.wa.variant()
    }

    pub fn poly(&self) -> &PolyAlg {
        &self.wa.poly
    }

    pub fn level(&self) -> usize {
        self.labels.len()
    }

    pub fn shuffles(&self) -> Vec<ObjectWord> {
        shuffles(self.d, self.level())
    }

    pub fn check_object(&self, w: &[Slot]) -> Result<()> {
        if black_count(w) != self.d || reds(w) != (0..self.level()).collect::<Vec<_>>() {
            return Err(Error::IncompatibleObjects(format!(
                "{} is not a shuffle of {} black strands with {} red strands",
                fmt_object(w),
                self.d,
                self.level()
            )));
        }
        Ok(())
    }

    pub fn pin(&self, r: usize, k: usize) -> &PolyElement {
        &self.pins[r][k]
    }

    /// Object after applying a generator, or an error if the generator does not fit.
    pub fn apply_gen(&self, obj: &[Slot], g: &Gen) -> Result<ObjectWord> {
        let p = g.slot();
        let bad = || Error::IllTypedWord(format!("{g:?} does not fit {}", fmt_object(obj)));
        let mut out = obj.to_vec();
        match g {
            Gen::Token(..) | Gen::Dot(_) | Gen::InvDot(_) => {
                if obj.get(p) != Some(&Slot::Black) {
                    return Err(bad());
                }
                if matches!(g, Gen::InvDot(_)) && self.variant() == Variant::Degenerate {
                    return Err(Error::WrongVariant("inverse dots need the quantum variant".into()));
                }
            }
            Gen::Cross(_) | Gen::NegCross(_) => {
                if obj.get(p) != Some(&Slot::Black) || obj.get(p + 1) != Some(&Slot::Black) {
                    return Err(bad());
                }
                if matches!(g, Gen::NegCross(_)) && self.variant() == Variant::Degenerate {
                    return Err(Error::WrongVariant("negative crossings need the quantum variant".into()));
                }
            }
            Gen::XRB(_) => {
                if obj.get(p) != Some(&Slot::Black) || !matches!(obj.get(p + 1), Some(Slot::Red(_))) {
                    return Err(bad());
                }
                out.swap(p, p + 1);
            }
            Gen::XBR(_) => {
                if !matches!(obj.get(p), Some(Slot::Red(_))) || obj.get(p + 1) != Some(&Slot::Black) {
                    return Err(bad());
                }
                out.swap(p, p + 1);
            }
        }
        Ok(out)
    }

    pub fn target(&self, src: &[Slot], word: &[Gen]) -> Result<ObjectWord> {
        let mut obj = src.to_vec();
        for g in word {
            obj = self.apply_gen(&obj, g)?;
        }
        Ok(obj)
    }

    /// Image of a single generator in the affine algebra.
    pub fn phi_gen(&self, obj: &[Slot], g: &Gen) -> Result<WreathElement> {
        self.apply_gen(obj, g)?;
        let wa = &self.wa;
        let p = g.slot();
        let k = black_index(obj, p);
        Ok(match g {
            Gen::Token(_, a) => wa.from_poly(&wa.poly.token(k, a)),
            Gen::Dot(_) => wa.from_poly(&wa.poly.dot(k, 1)),
            Gen::InvDot(_) => wa.from_poly(&wa.poly.dot(k, -1)),
            Gen::Cross(_) => wa.crossing(k),
            Gen::NegCross(_) => wa.crossing_inverse(k),
            Gen::XRB(_) => {
                let Slot::Red(r) = obj[p + 1] else { unreachable!() };
                wa.from_poly(&self.pins[r][k])
            }
            Gen::XBR(_) => wa.one(),
        })
    }

    /// Image of a bottom-to-top word.
    pub fn phi_word(&self, src: &[Slot], word: &[Gen]) -> Result<WreathElement> {
        let mut obj = src.to_vec();
        let mut acc = self.wa.one();
        for g in word {
            let img = self.phi_gen(&obj, g)?;
            acc = self.wa.mul(&img, &acc);
            obj = self.apply_gen(&obj, g)?;
        }
        Ok(acc)
    }

    /// Slot permutation sending each source slot to its target slot.
    fn slot_map(&self, src: &[Slot], tgt: &[Slot], w: &[u8]) -> Result<Vec<usize>> {
        self.check_object(src)?;
        self.check_object(tgt)?;
        if w.len() != self.d {
            return Err(Error::IncompatibleObjects("permutation size differs from the black strand count".into()));
        }
        let tgt_black: Vec<usize> = (0..tgt.len()).filter(|&p| tgt[p] == Slot::Black).collect();
        Ok((0..src.len())
            .map(|p| match src[p] {
                Slot::Black => tgt_black[w[black_index(src, p)] as usize],
                Slot::Red(r) => tgt.iter().position(|s| *s == Slot::Red(r)).unwrap(),
            })
            .collect())
    }

    /// Slots of the crossings of the canonical diagram, bottom to top.
    pub fn canonical_slots(&self, src: &[Slot], tgt: &[Slot], w: &[u8]) -> Result<Vec<usize>> {
        let mut arr = self.slot_map(src, tgt, w)?;
        let mut out = Vec::new();
        loop {
            let mut swapped = false;
            for p in 0..arr.len().saturating_sub(1) {
                if arr[p] > arr[p + 1] {
                    arr.swap(p, p + 1);
                    out.push(p);
                    swapped = true;
                }
            }
            if !swapped {
                return Ok(out);
            }
        }
    }

    /// Turns crossing slots into typed generators, starting from `src`.
    pub fn typed_crossings(&self, src: &[Slot], slots: &[usize]) -> Result<Vec<Gen>> {
        let mut obj = src.to_vec();
        let mut out = Vec::with_capacity(slots.len());
        for &p in slots {
            let g = match (obj.get(p), obj.get(p + 1)) {
                (Some(Slot::Black), Some(Slot::Black)) => Gen::Cross(p),
                (Some(Slot::Black), Some(Slot::Red(_))) => Gen::XRB(p),
                (Some(Slot::Red(_)), Some(Slot::Black)) => Gen::XBR(p),
                _ => return Err(Error::IllTypedWord(format!("no crossing of slots {p}, {} in {}", p + 1, fmt_object(&obj)))),
            };
            obj = self.apply_gen(&obj, &g)?;
            out.push(g);
        }
        Ok(out)
    }

    /// The canonical tokenless, dotless diagram `sigma_{tgt, w, src}`.
    pub fn canonical_diagram(&self, src: &[Slot], tgt: &[Slot], w: &[u8]) -> Result<Vec<Gen>> {
        let slots = self.canonical_slots(src, tgt, w)?;
        self.typed_crossings(src, &slots)
    }

    pub fn phi_canonical(&self, src: &[Slot], tgt: &[Slot], w: &[u8]) -> Result<WreathElement> {
        let key = (src.to_vec(), tgt.to_vec(), w.to_vec());
        if let Some(v) = self.phi_cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let word = self.canonical_diagram(src, tgt, w)?;
        let img = self.phi_word(src, &word)?;
        self.phi_cache.lock().unwrap().insert(key, img.clone());
        Ok(img)
    }

    /// Table `w -> (u -> h_{u,w})` of the images of the canonical diagrams.
    pub fn phi_basis(&self, src: &[Slot], tgt: &[Slot]) -> Result<BTreeMap<Perm, BTreeMap<Perm, PolyElement>>> {
        let mut out = BTreeMap::new();
        for w in perm::all(self.d) {
            out.insert(w.clone(), self.phi_canonical(src, tgt, &w)?.by_perm());
        }
        Ok(out)
    }

    /// Product of pin labels expected on the diagonal entry `h_{w,w}`.
    pub fn expected_diagonal(&self, src: &[Slot], tgt: &[Slot], w: &[u8]) -> Result<PolyElement> {
        let word = self.canonical_diagram(src, tgt, w)?;
        let mut obj = src.to_vec();
        // strand ids by black position, tracked through black-black crossings
        let mut ids: Vec<usize> = (0..self.d).collect();
        let mut pinned: Vec<(usize, usize)> = Vec::new();
        for g in &word {
            let k = black_index(&obj, g.slot());
            match g {
                Gen::Cross(_) => ids.swap(k, k + 1),
                Gen::XRB(p) => {
                    let Slot::Red(r) = obj[p + 1] else { unreachable!() };
                    pinned.push((r, ids[k]));
                }
                _ => {}
            }
            obj = self.apply_gen(&obj, g)?;
        }
        let mut h = self.poly().one();
        for (r, id) in pinned {
            let fin = ids.iter().position(|&x| x == id).unwrap();
            h = self.poly().mul(&h, &self.pins[r][fin]);
        }
        Ok(h)
    }

    /// Checks that `h_{w,w}` is the expected product of pins and that the table is triangular.
    pub fn certify_phi_basis(&self, src: &[Slot], tgt: &[Slot]) -> Result<()> {
        for (w, row) in self.phi_basis(src, tgt)? {
            let lw = perm::length(&w);
            for (u, h) in &row {
                if *u != w && perm::length(u) >= lw && !h.is_zero() {
                    return Err(Error::InternalInconsistency(format!("h_(u,w) nonzero above the diagonal for w={w:?}")));
                }
            }
            let diag = row.get(&w).cloned().unwrap_or_else(|| self.poly().zero());
            if diag != self.expected_diagonal(src, tgt, &w)? {
                return Err(Error::InternalInconsistency(format!("diagonal entry for w={w:?} is not the pin product")));
            }
            if !self.poly().is_central(&diag) || self.poly().homogeneous_parts(&diag)[1] != self.poly().zero() {
                return Err(Error::InternalInconsistency("diagonal entry is not even and central".into()));
            }
        }
        Ok(())
    }

    pub fn zero_morphism(&self, src: &[Slot], tgt: &[Slot]) -> Morphism {
        Morphism { src: src.to_vec(), tgt: tgt.to_vec(), body: self.wa.zero() }
    }

    pub fn identity(&self, obj: &[Slot]) -> Morphism {
        Morphism { src: obj.to_vec(), tgt: obj.to_vec(), body: self.wa.one() }
    }

    /// `f * sigma_{tgt, w, src}`.
    pub fn basis_morphism(&self, src: &[Slot], tgt: &[Slot], f: &PolyElement, w: &[u8]) -> Morphism {
        Morphism { src: src.to_vec(), tgt: tgt.to_vec(), body: self.wa.poly_times_perm(f, w) }
    }

    pub fn add(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        if f.src != g.src || f.tgt != g.tgt {
            return Err(Error::IncompatibleObjects("cannot add morphisms between different objects".into()));
        }
        Ok(Morphism { src: f.src.clone(), tgt: f.tgt.clone(), body: f.body.add(&g.body) })
    }

    pub fn phi(&self, f: &Morphism) -> Result<WreathElement> {
        let mut out = self.wa.zero();
        for (w, c) in f.body.by_perm() {
            let img = self.phi_canonical(&f.src, &f.tgt, &w)?;
            out += &self.wa.mul_poly_left(&c, &img);
        }
        Ok(out)
    }

    /// Recovers the morphism `src -> tgt` whose image is `e`, by triangular division.
    pub fn transport(&self, src: &[Slot], tgt: &[Slot], e: &WreathElement) -> Result<Morphism> {
        let mut perms = perm::all(self.d);
        perms.sort_by_key(|w| std::cmp::Reverse(perm::length(w)));
        let mut residual = e.clone();
        let mut body = self.wa.zero();
        for w in perms {
            let parts = residual.by_perm();
            let Some(rw) = parts.get(&w) else { continue };
            let img = self.phi_canonical(src, tgt, &w)?;
            let h = img.by_perm().remove(&w).unwrap_or_else(|| self.poly().zero());
            let c = self.poly().exact_divide(rw, &h).map_err(|err| {
                Error::InternalInconsistency(format!("division by the diagonal entry failed for w={w:?}: {err}"))
            })?;
            residual = residual.sub(&self.wa.mul_poly_left(&c, &img));
            body += &self.wa.poly_times_perm(&c, &w);
        }
        if !residual.is_zero() {
            return Err(Error::InternalInconsistency("transport left a nonzero residual".into()));
        }
        Ok(Morphism { src: src.to_vec(), tgt: tgt.to_vec(), body })
    }

    /// `g o f`.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if g.src != f.tgt {
            return Err(Error::IncompatibleObjects(format!("cannot compose {g} after {f}")));
        }
        let e = self.wa.mul(&self.phi(g)?, &self.phi(f)?);
        self.transport(&f.src, &g.tgt, &e)
    }

    /// Converts a generator word into rewriter layers; negative crossings expand
    /// as positive crossings minus `z` times a teleporter.
    pub fn items_of_word(&self, src: &[Slot], word: &[Gen]) -> Result<Vec<Vec<Item>>> {
        let mut lists: Vec<Vec<Item>> = vec![vec![]];
        let mut obj = src.to_vec();
        let poly = self.poly();
        for g in word {
            let next = self.apply_gen(&obj, g)?;
            let k = || black_index(&obj, g.slot());
            let layer = match g {
                Gen::Token(_, a) => Some(poly.token(k(), a)),
                Gen::Dot(_) => Some(poly.dot(k(), 1)),
                Gen::InvDot(_) => Some(poly.dot(k(), -1)),
                _ => None,
            };
            match (g, layer) {
                (_, Some(l)) => lists.iter_mut().for_each(|li| li.push(Item::Layer(l.clone()))),
                (Gen::NegCross(p), None) => {
                    let t = poly.tele(k()).scale(&-self.wa.z.clone());
                    let mut extra = lists.clone();
                    extra.iter_mut().for_each(|li| li.push(Item::Layer(t.clone())));
                    lists.iter_mut().for_each(|li| li.push(Item::Cross(*p)));
                    lists.extend(extra);
                }
                (g, None) => lists.iter_mut().for_each(|li| li.push(Item::Cross(g.slot()))),
            }
            obj = next;
        }
        Ok(lists)
    }

    /// Normal form of a generator word read bottom to top, by diagram rewriting.
    pub fn normalize_diagram(&self, src: &[Slot], word: &[Gen]) -> Result<Morphism> {
        self.check_object(src)?;
        let tgt = self.target(src, word)?;
        let mut body = self.wa.zero();
        for items in self.items_of_word(src, word)? {
            let (t, parts) = self.normalize_items(src, &items)?;
            debug_assert_eq!(t, tgt);
            body += &WreathElement::from_by_perm(self.d, self.variant(), &parts);
        }
        Ok(Morphism { src: src.to_vec(), tgt, body })
    }

    /// Normal form of a layered diagram.
    pub fn normalize_items(&self, src: &[Slot], items: &[Item]) -> Result<(ObjectWord, BTreeMap<Perm, PolyElement>)> {
        let poly = self.poly();
        let mut obj = src.to_vec();
        let mut state: BTreeMap<Perm, PolyElement> = BTreeMap::new();
        state.insert(perm::id(self.d), poly.one());
        for item in items {
            match item {
                Item::Layer(l) => {
                    for c in state.values_mut() {
                        *c = poly.mul(l, c);
                    }
                    state.retain(|_, c| !c.is_zero());
                }
                Item::Cross(p) => {
                    let p = *p;
                    let both_black = obj.get(p) == Some(&Slot::Black) && obj.get(p + 1) == Some(&Slot::Black);
                    let next_obj = match (obj.get(p), obj.get(p + 1)) {
                        (Some(a), Some(b)) if !(matches!(a, Slot::Red(_)) && matches!(b, Slot::Red(_))) => {
                            let mut o = obj.clone();
                            o.swap(p, p + 1);
                            o
                        }
                        _ => return Err(Error::IllTypedWord(format!("no crossing at slot {p} of {}", fmt_object(&obj)))),
                    };
                    let mut next: BTreeMap<Perm, PolyElement> = BTreeMap::new();
                    let mut acc = |w: Perm, f: PolyElement| {
                        if f.is_zero() {
                            return;
                        }
                        let e = next.entry(w).or_insert_with(|| poly.zero());
                        *e += &f;
                    };
                    for (w, c) in &state {
                        let (slid, corr) = if both_black {
                            let k = black_index(&obj, p);
                            let corr = match self.variant() {
                                Variant::Degenerate => poly.demazure(k, c)?.scale(&-Q::one()),
                                Variant::Quantum => poly.delta(k, c)?.scale(&self.wa.z),
                            };
                            (poly.s(k, c), corr)
                        } else {
                            (c.clone(), poly.zero())
                        };
                        acc(w.clone(), corr);
                        for (v, h) in self.crossing_on_canonical(src, &obj, w, p)? {
                            acc(v, poly.mul(&slid, &h));
                        }
                    }
                    state = next;
                    obj = next_obj;
                }
            }
        }
        Ok((obj, state))
    }

    /// `crossing(p) o sigma_{cur, w, src}` in the canonical basis of `Hom(src, cur')`.
    fn crossing_on_canonical(&self, src: &[Slot], cur: &[Slot], w: &[u8], p: usize) -> Result<BTreeMap<Perm, PolyElement>> {
        let key = (src.to_vec(), cur.to_vec(), w.to_vec(), p);
        if let Some(v) = self.cross_cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let mut slots = self.canonical_slots(src, cur, w)?;
        slots.push(p);
        let out = self.straighten(src, &slots)?;
        self.cross_cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Follows strands through a crossing word: final slot contents as source-slot ids.
    fn track(src: &[Slot], slots: &[usize]) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..src.len()).collect();
        for &p in slots {
            ids.swap(p, p + 1);
        }
        ids
    }

    fn is_reduced(src: &[Slot], slots: &[usize]) -> bool {
        let ids = Self::track(src, slots);
        let mut inv = 0;
        for a in 0..ids.len() {
            for b in a + 1..ids.len() {
                if ids[a] > ids[b] {
                    inv += 1;
                }
            }
        }
        inv == slots.len()
    }

    fn object_after(src: &[Slot], slots: &[usize]) -> ObjectWord {
        let mut obj = src.to_vec();
        for &p in slots {
            obj.swap(p, p + 1);
        }
        obj
    }

    /// Black permutation realised by a reduced crossing word.
    fn black_perm(src: &[Slot], slots: &[usize]) -> Perm {
        let ids = Self::track(src, slots);
        let tgt = Self::object_after(src, slots);
        let mut w = vec![0u8; black_count(src)];
        for (pos, &id) in ids.iter().enumerate() {
            if src[id] == Slot::Black {
                w[black_index(src, id)] = black_index(&tgt, pos) as u8;
            }
        }
        w
    }

    /// Expands a pure crossing word in the canonical basis.
    fn straighten(&self, src: &[Slot], slots: &[usize]) -> Result<BTreeMap<Perm, PolyElement>> {
        let poly = self.poly();
        let tgt = Self::object_after(src, slots);
        let mut corrections: Vec<Vec<Item>> = Vec::new();
        let mut out: BTreeMap<Perm, PolyElement> = BTreeMap::new();
        if Self::is_reduced(src, slots) {
            let w = Self::black_perm(src, slots);
            let canon = self.canonical_slots(src, &tgt, &w)?;
            self.to_canonical(src, slots, &canon, &mut corrections)?;
            out.insert(w, poly.one());
        } else {
            let q = (1..=slots.len()).find(|&q| !Self::is_reduced(src, &slots[..q])).unwrap() - 1;
            let c = slots[q];
            let mut pre_corr = Vec::new();
            let v = self.bring_to_end(src, &slots[..q], c, &mut pre_corr)?;
            let rest: Vec<Item> = slots[q + 1..].iter().map(|&p| Item::Cross(p)).collect();
            for mut corr in pre_corr {
                corr.push(Item::Cross(c));
                corr.extend(rest.iter().cloned());
                corrections.push(corr);
            }
            let base = &v[..v.len() - 1];
            let obj = Self::object_after(src, base);
            let mut prefix: Vec<Item> = base.iter().map(|&p| Item::Cross(p)).collect();
            match (obj[c], obj[c + 1]) {
                (Slot::Black, Slot::Black) => {
                    if self.variant() == Variant::Quantum {
                        let k = black_index(&obj, c);
                        let mut alt = prefix.clone();
                        alt.push(Item::Layer(poly.tele(k).scale(&self.wa.z)));
                        alt.push(Item::Cross(c));
                        alt.extend(rest.iter().cloned());
                        corrections.push(alt);
                    }
                }
                (Slot::Black, Slot::Red(r)) | (Slot::Red(r), Slot::Black) => {
                    let k = black_index(&obj, c);
                    prefix.push(Item::Layer(self.pins[r][k].clone()));
                }
                _ => return Err(Error::IllTypedWord("red strands cannot cross".into())),
            }
            prefix.extend(rest);
            corrections.push(prefix);
        }
        for corr in corrections {
            let (t, parts) = self.normalize_items(src, &corr)?;
            debug_assert_eq!(t, tgt);
            for (w, f) in parts {
                let e = out.entry(w).or_insert_with(|| poly.zero());
                *e += &f;
            }
        }
        out.retain(|_, f| !f.is_zero());
        Ok(out)
    }

    /// Rewrites reduced `slots` into the reduced word `canon`, collecting correction diagrams.
    fn to_canonical(&self, src: &[Slot], slots: &[usize], canon: &[usize], corr: &mut Vec<Vec<Item>>) -> Result<()> {
        let Some((&k, canon_rest)) = canon.split_last() else {
            debug_assert!(slots.is_empty());
            return Ok(());
        };
        let v = self.bring_to_end(src, slots, k, corr)?;
        let mut sub = Vec::new();
        self.to_canonical(src, &v[..v.len() - 1], canon_rest, &mut sub)?;
        for mut c in sub {
            c.push(Item::Cross(k));
            corr.push(c);
        }
        Ok(())
    }

    /// Rewrites reduced `slots` (with `k` a right descent) into a reduced word ending in `k`.
    fn bring_to_end(&self, src: &[Slot], slots: &[usize], k: usize, corr: &mut Vec<Vec<Item>>) -> Result<Vec<usize>> {
        let Some((&j, prefix)) = slots.split_last() else {
            return Err(Error::InternalInconsistency("crossing is not a descent of the word".into()));
        };
        if j == k {
            return Ok(slots.to_vec());
        }
        if j.abs_diff(k) >= 2 {
            let mut sub = Vec::new();
            let mut p1 = self.bring_to_end(src, prefix, k, &mut sub)?;
            for mut c in sub {
                c.push(Item::Cross(j));
                corr.push(c);
            }
            p1.pop();
            p1.push(j);
            p1.push(k);
            return Ok(p1);
        }
        let mut sub1 = Vec::new();
        let mut p1 = self.bring_to_end(src, prefix, k, &mut sub1)?;
        for mut c in sub1 {
            c.push(Item::Cross(j));
            corr.push(c);
        }
        p1.pop();
        let mut sub2 = Vec::new();
        let mut p2 = self.bring_to_end(src, &p1, j, &mut sub2)?;
        for mut c in sub2 {
            c.push(Item::Cross(k));
            c.push(Item::Cross(j));
            corr.push(c);
        }
        p2.pop();
        // p2 [j k j] -> p2 [k j k]
        let obj = Self::object_after(src, &p2);
        let m = j.min(k);
        if let (Slot::Black, Slot::Red(r), Slot::Black) = (obj[m], obj[m + 1], obj[m + 2]) {
            let kb = black_index(&obj, m);
            let q = &self.pins[r][kb];
            // [m, m+1, m] = [m+1, m, m+1] + delta
            let delta = match self.variant() {
                Variant::Degenerate => self.poly().demazure(kb, q)?.scale(&-Q::one()),
                Variant::Quantum => self.poly().delta(kb, q)?.scale(&self.wa.z),
            };
            let delta = if j == m { delta } else { delta.scale(&-Q::one()) };
            if !delta.is_zero() {
                let mut c: Vec<Item> = p2.iter().map(|&p| Item::Cross(p)).collect();
                c.push(Item::Layer(delta));
                corr.push(c);
            }
        }
        p2.extend([k, j, k]);
        Ok(p2)
    }

    /// Single generator as a normal-form morphism.
    pub fn gen_morphism(&self, obj: &[Slot], g: &Gen) -> Result<Morphism> {
        let next = self.apply_gen(obj, g)?;
        self.transport(obj, &next, &self.phi_gen(obj, g)?)
    }

    pub fn pieces_target(&self, src: &[Slot], pieces: &[Piece]) -> Result<ObjectWord> {
        let mut obj = src.to_vec();
        for pc in pieces {
            if let Piece::G(g) = pc {
                obj = self.apply_gen(&obj, g)?;
            }
        }
        Ok(obj)
    }

    pub fn phi_pieces(&self, src: &[Slot], pieces: &[Piece]) -> Result<WreathElement> {
        let mut obj = src.to_vec();
        let mut acc = self.wa.one();
        for pc in pieces {
            match pc {
                Piece::G(g) => {
                    acc = self.wa.mul(&self.phi_gen(&obj, g)?, &acc);
                    obj = self.apply_gen(&obj, g)?;
                }
                Piece::L(f) => acc = self.wa.mul_poly_left(f, &acc),
            }
        }
        Ok(acc)
    }

    /// Vertical composite computed one generator at a time through `compose`.
    pub fn compose_pieces(&self, src: &[Slot], pieces: &[Piece]) -> Result<Morphism> {
        let mut m = self.identity(src);
        for pc in pieces {
            let step = match pc {
                Piece::G(g) => self.gen_morphism(&m.tgt, g)?,
                Piece::L(f) => self.basis_morphism(&m.tgt, &m.tgt, f, &perm::id(self.d)),
            };
            m = self.compose(&step, &m)?;
        }
        Ok(m)
    }

    /// Vertical composite computed by the rewriter.
    pub fn normalize_pieces(&self, src: &[Slot], pieces: &[Piece]) -> Result<Morphism> {
        self.check_object(src)?;
        let mut lists: Vec<Vec<Item>> = vec![vec![]];
        let mut obj = src.to_vec();
        for pc in pieces {
            match pc {
                Piece::G(g) => {
                    let alts = self.items_of_word(&obj, std::slice::from_ref(g))?;
                    lists = lists
                        .iter()
                        .flat_map(|l| {
                            alts.iter().map(move |a| {
                                let mut l2 = l.clone();
                                l2.extend(a.iter().cloned());
                                l2
                            })
                        })
                        .collect();
                    obj = self.apply_gen(&obj, g)?;
                }
                Piece::L(f) => lists.iter_mut().for_each(|l| l.push(Item::Layer(f.clone()))),
            }
        }
        let mut body = self.wa.zero();
        for items in lists {
            let (_, parts) = self.normalize_items(src, &items)?;
            body += &WreathElement::from_by_perm(self.d, self.variant(), &parts);
        }
        Ok(Morphism { src: src.to_vec(), tgt: obj, body })
    }

    /// Identity of the path algebra: the sum of all idempotents.
    pub fn path_identity(&self) -> PathElement {
        let mut blocks = BTreeMap::new();
        for o in self.shuffles() {
            blocks.insert((o.clone(), o.clone()), self.identity(&o));
        }
        PathElement { blocks }
    }

    pub fn path_multiply(&self, u: &PathElement, v: &PathElement) -> Result<PathElement> {
        let mut blocks: BTreeMap<(ObjectWord, ObjectWord), Morphism> = BTreeMap::new();
        for ((j, k), g) in &u.blocks {
            for ((i, j2), f) in &v.blocks {
                if j != j2 {
                    continue;
                }
                let h = self.compose(g, f)?;
                let key = (i.clone(), k.clone());
                match blocks.get_mut(&key) {
                    Some(e) => e.body = e.body.add(&h.body),
                    None => {
                        blocks.insert(key, h);
                    }
                }
            }
        }
        blocks.retain(|_, m| !m.body.is_zero());
        Ok(PathElement { blocks })
    }

    /// Block matrix of images, indexed `(target, source)` by position in `shuffles()`.
    pub fn block_matrix(&self, u: &PathElement) -> Result<Vec<Vec<WreathElement>>> {
        let objs = self.shuffles();
        let pos = |o: &ObjectWord| objs.iter().position(|x| x == o).unwrap();
        let mut mat = vec![vec![self.wa.zero(); objs.len()]; objs.len()];
        for ((s, t), m) in &u.blocks {
            mat[pos(t)][pos(s)] = self.phi(m)?;
        }
        Ok(mat)
    }

    pub fn matrix_product(&self, a: &[Vec<WreathElement>], b: &[Vec<WreathElement>]) -> Vec<Vec<WreathElement>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(self.wa.zero(), |acc, k| acc.add(&self.wa.mul(&a[i][k], &b[k][j]))))
                    .collect()
            })
            .collect()
    }

    /// `f` placed on every idempotent.
    pub fn diagonal(&self, f: &PolyElement) -> PathElement {
        let mut blocks = BTreeMap::new();
        if !f.is_zero() {
            for o in self.shuffles() {
                blocks.insert((o.clone(), o.clone()), self.basis_morphism(&o, &o, f, &perm::id(self.d)));
            }
        }
        PathElement { blocks }
    }

    /// Center test: `sum_i f 1_i` for one symmetric supercentral `f`.
    pub fn is_central_path(&self, u: &PathElement) -> bool {
        if u.blocks.is_empty() {
            return true;
        }
        let objs = self.shuffles();
        if u.blocks.len() != objs.len() || u.blocks.keys().any(|(s, t)| s != t) {
            return false;
        }
        let first = u.blocks.values().next().unwrap().body.clone();
        if u.blocks.values().any(|m| m.body != first) {
            return false;
        }
        self.wa.is_central(&first)
    }

    /// The object with all red strands on the left.
    pub fn corner_object(&self) -> ObjectWord {
        let mut o: ObjectWord = (0..self.level()).map(Slot::Red).collect();
        o.extend(std::iter::repeat_n(Slot::Black, self.d));
        o
    }

    /// Adds the red strands on the left: an element of the affine algebra as an endomorphism of the corner object.
    pub fn corner_embed(&self, u: &WreathElement) -> Morphism {
        let o = self.corner_object();
        Morphism { src: o.clone(), tgt: o, body: u.clone() }
    }
}

/// A generator or a polynomial layer on the black strands.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    G(Gen),
    L(PolyElement),
}

/// Element of the path algebra: blocks keyed `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathElement {
    pub blocks: BTreeMap<(ObjectWord, ObjectWord), Morphism>,
}

impl PathElement {
    pub fn from_morphism(m: Morphism) -> Self {
        let mut blocks = BTreeMap::new();
        if !m.body.is_zero() {
            blocks.insert((m.src.clone(), m.tgt.clone()), m);
        }
        PathElement { blocks }
    }

    pub fn add(&self, other: &PathElement) -> PathElement {
        let mut out = self.clone();
        for (k, m) in &other.blocks {
            match out.blocks.get_mut(k) {
                Some(e) => e.body = e.body.add(&m.body),
                None => {
                    out.blocks.insert(k.clone(), m.clone());
                }
            }
        }
        out.blocks.retain(|_, m| !m.body.is_zero());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use crate::rational::q;
    use num_traits::Zero;

    fn session(d: usize, labels: &[&[(i32, i64)]]) -> Session {
        let alg = Arc::new(builtin::ground());
        let one = PolyAlg::new(alg.clone(), 1, Variant::Degenerate);
        let ls = labels
            .iter()
            .map(|cs| {
                let mut f = one.zero();
                for &(e, c) in cs.iter() {
                    f += &one.dot(0, e).scale(&q(c));
                }
                one.pin_label(&f).unwrap()
            })
            .collect();
        Session::new(alg, d, Variant::Degenerate, Q::zero(), ls).unwrap()
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 1), vec![vec![Slot::Black, Slot::Red(0)], vec![Slot::Red(0), Slot::Black]]);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(0, 2), vec![vec![Slot::Red(0), Slot::Red(1)]]);
    }

    #[test]
    fn double_crossing_is_a_dot() {
        let s = session(1, &[&[(1, 1)]]);
        let src = vec![Slot::Red(0), Slot::Black];
        let m = s.normalize_diagram(&src, &[Gen::XBR(0), Gen::XRB(0)]).unwrap();
        let x = s.basis_morphism(&src, &src, &s.poly().dot(0, 1), &[0]);
        assert_eq!(m, x);
        let f = s.normalize_diagram(&src, &[Gen::XBR(0)]).unwrap();
        let g = s.normalize_diagram(&f.tgt, &[Gen::XRB(0)]).unwrap();
        assert_eq!(s.compose(&g, &f).unwrap(), x);
    }

    #[test]
    fn red_strand_slides_through_black_crossing() {
        let s = session(2, &[&[(2, 1)]]);
        let src = vec![Slot::Black, Slot::Red(0), Slot::Black];
        let lhs = s.normalize_diagram(&src, &[Gen::XRB(0), Gen::Cross(1), Gen::XBR(0)]).unwrap();
        let rhs = s.normalize_diagram(&src, &[Gen::XBR(1), Gen::Cross(0), Gen::XRB(1)]).unwrap();
        let d = s.poly().dot(0, 1).add(&s.poly().dot(1, 1));
        let expect = s.add(&rhs, &s.basis_morphism(&src, &src, &d.scale(&q(-1)), &[0, 1])).unwrap();
        assert_eq!(lhs, expect);
        assert_eq!(s.phi(&lhs).unwrap(), s.phi_word(&src, &[Gen::XRB(0), Gen::Cross(1), Gen::XBR(0)]).unwrap());
    }
}
