use std::sync::Arc;

use crate::corpus::{strip_factor_marker, TemplateId, TemplateInventory};

/// An ordered list of templates with its rendered token stream and chunk-tag
/// signature cached alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    templates: Vec<TemplateId>,
    surface: Vec<Arc<str>>,
    signature: Vec<Arc<str>>,
}

impl Chromosome {
    /// Returns `None` for an empty template list.
    pub fn from_templates(
        templates: Vec<TemplateId>,
        inventory: &TemplateInventory,
    ) -> Option<Self> {
        if templates.is_empty() {
            return None;
        }
        let surface = templates
            .iter()
            .flat_map(|&id| inventory.rendered(id).iter().cloned())
            .collect();
        let signature = templates
            .iter()
            .map(|&id| inventory.tag(id).clone())
            .collect();
        Some(Chromosome {
            templates,
            surface,
            signature,
        })
    }

    pub fn single(id: TemplateId, inventory: &TemplateInventory) -> Self {
        Self::from_templates(vec![id], inventory).unwrap()
    }

    pub fn templates(&self) -> &[TemplateId] {
        &self.templates
    }

    /// Rendered tokens; factors appear as `__POS__`.
    pub fn surface(&self) -> &[Arc<str>] {
        &self.surface
    }

    pub fn signature(&self) -> &[Arc<str>] {
        &self.signature
    }

    /// Length in templates.
    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn surface_text(&self) -> String {
        join(&self.surface)
    }

    pub fn signature_text(&self) -> String {
        join(&self.signature)
    }

    /// Surface with factors shown as bare POS (`in the NN`).
    pub fn display_text(&self) -> String {
        display(&self.surface_text())
    }

    /// Whether the caches agree with a fresh rendering of the template list.
    pub fn is_coherent(&self, inventory: &TemplateInventory) -> bool {
        Self::from_templates(self.templates.clone(), inventory).as_ref() == Some(self)
    }
}

fn join(tokens: &[Arc<str>]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(t);
    }
    out
}

/// Rewrite every `__POS__` token of a space-separated surface as `POS`.
pub fn display(surface: &str) -> String {
    surface
        .split(' ')
        .map(|t| strip_factor_marker(t).unwrap_or(t))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Juxtaposition: the offspring is `left` followed by `right`.
pub fn crossover(left: &Chromosome, right: &Chromosome) -> Chromosome {
    let concat = |a: &[Arc<str>], b: &[Arc<str>]| a.iter().chain(b).cloned().collect::<Vec<_>>();
    Chromosome {
        templates: left
            .templates
            .iter()
            .chain(&right.templates)
            .copied()
            .collect(),
        surface: concat(&left.surface, &right.surface),
        signature: concat(&left.signature, &right.signature),
    }
}
