use super::{Elem, FiniteGroup, TracePair};

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    /// ATLAS-style name: element order followed by a letter, e.g. `7B`.
    pub name: String,
    pub representative: Elem,
    pub order: u32,
    pub elements: Vec<Elem>,
    pub trace: Option<TracePair>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Conjugacy classes sorted by (element order, class size, least element).
#[derive(Clone, Debug)]
pub struct ClassData {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
    /// `power_map[c][k]` is the class of `rep(c)^k`, for `0 ≤ k < order`.
    power_map: Vec<Vec<u32>>,
}

fn letters(mut k: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

impl ClassData {
    pub(crate) fn compute(g: &FiniteGroup) -> Self {
        let n = g.order();
        let gens = g.generators();
        let mut raw: Vec<Vec<Elem>> = Vec::new();
        let mut assigned = vec![false; n];
        for start in g.elements() {
            if assigned[start.idx()] {
                continue;
            }
            assigned[start.idx()] = true;
            let mut orbit = vec![start];
            let mut head = 0;
            while head < orbit.len() {
                let h = orbit[head];
                head += 1;
                for &s in gens {
                    let k = g.conj(h, s);
                    if !assigned[k.idx()] {
                        assigned[k.idx()] = true;
                        orbit.push(k);
                    }
                }
            }
            orbit.sort();
            raw.push(orbit);
        }
        raw.sort_by_key(|c| (g.element_order(c[0]), c.len(), c[0]));

        let mut class_of = vec![0u32; n];
        let mut classes = Vec::with_capacity(raw.len());
        let mut letter = 0;
        let mut prev_order = None;
        for (i, elements) in raw.into_iter().enumerate() {
            let rep = elements[0];
            let order = g.element_order(rep);
            if prev_order != Some(order) {
                letter = 0;
                prev_order = Some(order);
            }
            for &e in &elements {
                class_of[e.idx()] = i as u32;
            }
            classes.push(ConjugacyClass {
                name: format!("{order}{}", letters(letter)),
                representative: rep,
                order,
                elements,
                trace: g.trace_pair(rep).ok(),
            });
            letter += 1;
        }
        let power_map = classes
            .iter()
            .map(|c| (0..c.order.max(1)).map(|k| class_of[g.pow(c.representative, k as i64).idx()]).collect())
            .collect();
        ClassData { classes, class_of, power_map }
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &ConjugacyClass {
        &self.classes[i]
    }

    #[inline]
    pub fn class_of(&self, g: Elem) -> usize {
        self.class_of[g.idx()] as usize
    }

    pub fn by_name(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Class of `rep(c)^k`.
    pub fn power(&self, c: usize, k: i64) -> usize {
        let row = &self.power_map[c];
        row[k.rem_euclid(row.len() as i64) as usize] as usize
    }
}
