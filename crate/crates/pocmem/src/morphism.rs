//! Structure-preserving maps between poc-sets: `0` maps to `0`, order is
//! preserved, and complementation commutes with the map. Only the images of
//! positive tags are stored; everything else follows.

use thiserror::Error;

use crate::pocset::{Elem, PocSet};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MorphismError {
    #[error("tag image count {got} does not match source tag count {want}")]
    ImageCount { got: usize, want: usize },
    #[error("image element out of range for the target poc-set")]
    ImageRange,
    #[error("not order-preserving: {a} < {b} in the source but {fa} <= {fb} fails in the target")]
    NotOrderPreserving {
        a: String,
        b: String,
        fa: String,
        fb: String,
    },
    #[error("composition mismatch: the first map's target differs from the second map's source")]
    ComposeMismatch,
}

/// A poc-morphism, stored as the image of each positive source tag.
#[derive(Clone, PartialEq, Debug)]
pub struct PocMorphism {
    source: PocSet,
    target: PocSet,
    /// `images[i]` is the image of tag `i`'s positive literal.
    images: Vec<Elem>,
}

impl PocMorphism {
    /// Validates order preservation over every source pair. Complementation
    /// equivariance and `0 -> 0` hold by construction.
    pub fn new(source: PocSet, target: PocSet, images: Vec<Elem>) -> Result<Self, MorphismError> {
        if images.len() != source.tag_count() {
            return Err(MorphismError::ImageCount {
                got: images.len(),
                want: source.tag_count(),
            });
        }
        if images.iter().any(|e| e.0 as usize >= target.elem_count()) {
            return Err(MorphismError::ImageRange);
        }
        let f = PocMorphism {
            source,
            target,
            images,
        };
        for a in f.source.elems() {
            for b in f.source.elems() {
                if f.source.lt(a, b) && !f.target.le(f.apply(a), f.apply(b)) {
                    return Err(MorphismError::NotOrderPreserving {
                        a: f.source.elem_name(a),
                        b: f.source.elem_name(b),
                        fa: f.target.elem_name(f.apply(a)),
                        fb: f.target.elem_name(f.apply(b)),
                    });
                }
            }
        }
        Ok(f)
    }

    /// The identity morphism on `p`.
    pub fn identity(p: &PocSet) -> Self {
        let images = (0..p.tag_count()).map(Elem::positive).collect();
        PocMorphism {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    /// The map sending each shared tag to itself. Fails when a source tag is
    /// absent from the target or when the orders disagree.
    pub fn inclusion(source: &PocSet, target: &PocSet) -> Result<Self, MorphismError> {
        let images = source
            .tags()
            .iter()
            .map(|t| target.tag_elem(t).ok_or(MorphismError::ImageRange))
            .collect::<Result<Vec<_>, _>>()?;
        PocMorphism::new(source.clone(), target.clone(), images)
    }

    pub fn source(&self) -> &PocSet {
        &self.source
    }

    pub fn target(&self) -> &PocSet {
        &self.target
    }

    /// Image of any element: `0 -> 0`, `1 -> 1`, and `f(a*) = f(a)*`.
    pub fn apply(&self, e: Elem) -> Elem {
        if e == Elem::ZERO {
            Elem::ZERO
        } else if e == Elem::ONE {
            Elem::ONE
        } else if e.is_positive() {
            self.images[e.tag()]
        } else {
            self.images[e.tag()].star()
        }
    }

    /// Diagrammatic composition: `self` first, then `g`.
    pub fn then(&self, g: &PocMorphism) -> Result<PocMorphism, MorphismError> {
        if self.target != g.source {
            return Err(MorphismError::ComposeMismatch);
        }
        let images = self.images.iter().map(|&e| g.apply(e)).collect();
        // Both factors preserve order, so the composite does; skip revalidation.
        Ok(PocMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            images,
        })
    }

    /// True when every target element is an image.
    pub fn is_surjective(&self) -> bool {
        self.target
            .elems()
            .all(|t| self.source.elems().any(|s| self.apply(s) == t))
    }

    /// True when the map is injective and reflects order, making it an
    /// isomorphism onto its image.
    pub fn is_embedding(&self) -> bool {
        let injective = self.source.elems().all(|a| {
            self.source
                .elems()
                .all(|b| a == b || self.apply(a) != self.apply(b))
        });
        injective
            && self.source.elems().all(|a| {
                self.source.elems().all(|b| {
                    !self.target.le(self.apply(a), self.apply(b)) || self.source.le(a, b)
                })
            })
    }
}
