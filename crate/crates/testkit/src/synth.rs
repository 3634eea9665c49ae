//! Seeded generator of chunk-annotated English-like sentences with Zipfian
//! word frequencies, in 3-column `word POS chunk` form.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DETS: &[&str] = &["the", "a", "this", "every", "some", "that"];
const PRONOUNS: &[&str] = &["it", "he", "she", "they", "we", "you"];
const NOUNS: &[&str] = &[
    "time",
    "year",
    "people",
    "way",
    "day",
    "man",
    "thing",
    "woman",
    "life",
    "child",
    "world",
    "school",
    "state",
    "family",
    "student",
    "group",
    "country",
    "problem",
    "hand",
    "part",
    "place",
    "case",
    "week",
    "company",
    "system",
    "program",
    "question",
    "work",
    "government",
    "number",
    "night",
    "point",
    "home",
    "water",
    "room",
    "mother",
    "area",
    "money",
    "story",
    "fact",
    "month",
    "lot",
    "right",
    "study",
    "book",
    "eye",
    "job",
    "word",
    "business",
    "issue",
    "side",
    "kind",
    "head",
    "house",
    "service",
    "friend",
    "father",
    "power",
    "hour",
    "game",
    "line",
    "end",
    "member",
    "law",
    "car",
    "city",
    "community",
    "name",
    "president",
    "team",
    "minute",
    "idea",
    "kid",
    "body",
    "information",
    "back",
    "parent",
    "face",
    "others",
    "level",
    "office",
    "door",
    "health",
    "person",
    "art",
    "war",
    "history",
    "party",
    "result",
    "change",
    "morning",
    "reason",
    "research",
    "girl",
    "guy",
    "moment",
    "air",
    "teacher",
    "force",
    "education",
    "granary",
    "cottage",
    "supercomputer",
    "salutation",
    "timebank",
    "organisation",
    "dialogue",
    "window",
    "seat",
    "labour",
    "magazine",
    "gentleman",
    "holiday",
    "pool",
    "skill",
];
const PLURALS: &[&str] = &[
    "years",
    "people",
    "things",
    "children",
    "students",
    "groups",
    "countries",
    "problems",
    "hands",
    "parts",
    "places",
    "weeks",
    "companies",
    "systems",
    "programs",
    "questions",
    "numbers",
    "nights",
    "points",
    "rooms",
    "areas",
    "stories",
    "facts",
    "months",
    "studies",
    "books",
    "eyes",
    "jobs",
    "words",
    "issues",
    "houses",
    "services",
    "friends",
    "hours",
    "games",
    "lines",
    "members",
    "laws",
    "cars",
    "cities",
    "names",
    "teams",
    "minutes",
    "ideas",
    "kids",
    "bodies",
    "parents",
    "faces",
    "levels",
    "offices",
    "doors",
    "changes",
    "reasons",
    "girls",
    "moments",
    "teachers",
    "skills",
    "cottages",
];
const PROPER: &[&str] = &[
    "John",
    "Mary",
    "London",
    "Paris",
    "BBC",
    "Google",
    "Smith",
    "Europe",
    "Monday",
    "Oxford",
    "Rob",
    "Bev",
    "Texas",
    "Sarah",
    "David",
    "Berlin",
    "NASA",
    "Thames",
    "Microsoft",
    "Alice",
];
const ADJS: &[&str] = &[
    "new",
    "good",
    "high",
    "old",
    "great",
    "big",
    "small",
    "large",
    "national",
    "young",
    "different",
    "long",
    "little",
    "important",
    "political",
    "bad",
    "white",
    "real",
    "best",
    "right",
    "social",
    "only",
    "public",
    "sure",
    "low",
    "early",
    "able",
    "human",
    "local",
    "late",
    "hard",
    "major",
    "better",
    "economic",
    "strong",
    "possible",
    "whole",
    "free",
    "military",
    "true",
    "federal",
    "international",
    "full",
    "special",
    "easy",
    "clear",
    "recent",
    "certain",
    "personal",
    "open",
    "red",
    "difficult",
    "available",
    "likely",
    "short",
    "single",
    "medical",
    "current",
    "wrong",
    "private",
    "safe",
    "western",
];
// (base, past, 3sg, participle)
const VERBS: &[(&str, &str, &str, &str)] = &[
    ("say", "said", "says", "said"),
    ("make", "made", "makes", "made"),
    ("go", "went", "goes", "gone"),
    ("take", "took", "takes", "taken"),
    ("see", "saw", "sees", "seen"),
    ("know", "knew", "knows", "known"),
    ("get", "got", "gets", "got"),
    ("give", "gave", "gives", "given"),
    ("find", "found", "finds", "found"),
    ("think", "thought", "thinks", "thought"),
    ("tell", "told", "tells", "told"),
    ("become", "became", "becomes", "become"),
    ("show", "showed", "shows", "shown"),
    ("leave", "left", "leaves", "left"),
    ("feel", "felt", "feels", "felt"),
    ("bring", "brought", "brings", "brought"),
    ("begin", "began", "begins", "begun"),
    ("keep", "kept", "keeps", "kept"),
    ("hold", "held", "holds", "held"),
    ("write", "wrote", "writes", "written"),
    ("stand", "stood", "stands", "stood"),
    ("hear", "heard", "hears", "heard"),
    ("meet", "met", "meets", "met"),
    ("run", "ran", "runs", "run"),
    ("pay", "paid", "pays", "paid"),
    ("sit", "sat", "sits", "sat"),
    ("speak", "spoke", "speaks", "spoken"),
    ("lead", "led", "leads", "led"),
    ("read", "read", "reads", "read"),
    ("build", "built", "builds", "built"),
    ("study", "studied", "studies", "studied"),
    ("test", "tested", "tests", "tested"),
    ("use", "used", "uses", "used"),
    ("locate", "located", "locates", "located"),
    ("help", "helped", "helps", "helped"),
    ("draw", "drew", "draws", "drawn"),
    ("wring", "wrung", "wrings", "wrung"),
    ("hope", "hoped", "hopes", "hoped"),
];
const ADVS: &[&str] = &[
    "also",
    "just",
    "now",
    "then",
    "still",
    "even",
    "never",
    "really",
    "always",
    "often",
    "so",
    "well",
    "already",
    "sometimes",
    "internationally",
    "properly",
    "quickly",
    "together",
    "soon",
    "usually",
];
const PREPS: &[&str] = &[
    "of", "in", "to", "for", "with", "on", "at", "from", "by", "about", "into", "over",
];
const MODALS: &[&str] = &["can", "will", "would", "should", "may", "could"];
const NUMBERS: &[&str] = &["two", "three", "five", "ten", "20", "100"];

type Tok = (String, &'static str);

/// Zipf-distributed picker over a word list.
struct Zipf(WeightedIndex<f64>);

impl Zipf {
    fn new(n: usize) -> Zipf {
        Zipf(WeightedIndex::new((1..=n).map(|r| 1.0 / r as f64)).unwrap())
    }
    fn pick<'a, T, R: Rng>(&self, rng: &mut R, list: &'a [T]) -> &'a T {
        &list[self.0.sample(rng)]
    }
}

pub struct SynthCorpus {
    rng: ChaCha8Rng,
    z_det: Zipf,
    z_pron: Zipf,
    z_noun: Zipf,
    z_plural: Zipf,
    z_proper: Zipf,
    z_adj: Zipf,
    z_verb: Zipf,
    z_adv: Zipf,
    z_prep: Zipf,
    z_modal: Zipf,
    z_num: Zipf,
}

impl SynthCorpus {
    pub fn new(seed: u64) -> Self {
        SynthCorpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
            z_det: Zipf::new(DETS.len()),
            z_pron: Zipf::new(PRONOUNS.len()),
            z_noun: Zipf::new(NOUNS.len()),
            z_plural: Zipf::new(PLURALS.len()),
            z_proper: Zipf::new(PROPER.len()),
            z_adj: Zipf::new(ADJS.len()),
            z_verb: Zipf::new(VERBS.len()),
            z_adv: Zipf::new(ADVS.len()),
            z_prep: Zipf::new(PREPS.len()),
            z_modal: Zipf::new(MODALS.len()),
            z_num: Zipf::new(NUMBERS.len()),
        }
    }

    fn w<T: ToString>(x: T, pos: &'static str) -> Tok {
        (x.to_string(), pos)
    }

    fn np(&mut self) -> Vec<Tok> {
        let r = &mut self.rng;
        let roll: f64 = r.gen();
        if roll < 0.12 {
            vec![Self::w(self.z_pron.pick(r, PRONOUNS), "PRP")]
        } else if roll < 0.22 {
            let mut v = vec![Self::w(self.z_proper.pick(r, PROPER), "NNP")];
            if r.gen_bool(0.3) {
                v.push(Self::w(self.z_proper.pick(r, PROPER), "NNP"));
            }
            v
        } else if roll < 0.32 {
            vec![
                Self::w(self.z_num.pick(r, NUMBERS), "CD"),
                Self::w(self.z_plural.pick(r, PLURALS), "NNS"),
            ]
        } else if roll < 0.47 {
            let mut v = Vec::new();
            if r.gen_bool(0.5) {
                v.push(Self::w(self.z_adj.pick(r, ADJS), "JJ"));
            }
            v.push(Self::w(self.z_plural.pick(r, PLURALS), "NNS"));
            v
        } else {
            let mut v = vec![Self::w(self.z_det.pick(r, DETS), "DT")];
            let adjs = if r.gen_bool(0.45) {
                1 + usize::from(r.gen_bool(0.2))
            } else {
                0
            };
            for _ in 0..adjs {
                v.push(Self::w(self.z_adj.pick(r, ADJS), "JJ"));
            }
            if r.gen_bool(0.12) {
                v.push(Self::w(self.z_noun.pick(r, NOUNS), "NN"));
            }
            v.push(Self::w(self.z_noun.pick(r, NOUNS), "NN"));
            v
        }
    }

    fn vp(&mut self) -> Vec<Tok> {
        let r = &mut self.rng;
        let verb = *self.z_verb.pick(r, VERBS);
        let roll: f64 = r.gen();
        let mut v = Vec::new();
        if r.gen_bool(0.1) {
            v.push(Self::w(self.z_adv.pick(r, ADVS), "RB"));
        }
        if roll < 0.4 {
            v.push(Self::w(verb.1, "VBD"));
        } else if roll < 0.65 {
            v.push(Self::w(verb.2, "VBZ"));
        } else if roll < 0.8 {
            v.push(Self::w(self.z_modal.pick(r, MODALS), "MD"));
            v.push(Self::w(verb.0, "VB"));
        } else if roll < 0.9 {
            v.push(Self::w(if r.gen_bool(0.5) { "has" } else { "had" }, "VBZ"));
            v.push(Self::w(verb.3, "VBN"));
        } else {
            v.push(Self::w(verb.1, "VBD"));
            v.push(Self::w("to", "TO"));
            v.push(Self::w(self.z_verb.pick(r, VERBS).0, "VB"));
        }
        v
    }

    fn chunk(out: &mut Vec<(String, &'static str, String)>, tag: &str, toks: Vec<Tok>) {
        for (i, (w, p)) in toks.into_iter().enumerate() {
            let label = if tag == "O" {
                "O".to_string()
            } else if i == 0 {
                format!("B-{tag}")
            } else {
                format!("I-{tag}")
            };
            out.push((w, p, label));
        }
    }

    fn pp(&mut self, out: &mut Vec<(String, &'static str, String)>) {
        let prep = *self.z_prep.pick(&mut self.rng, PREPS);
        Self::chunk(out, "PP", vec![Self::w(prep, "IN")]);
        let np = self.np();
        Self::chunk(out, "NP", np);
    }

    /// One sentence as (word, POS, chunk label) rows.
    pub fn sentence(&mut self) -> Vec<(String, &'static str, String)> {
        let mut out = Vec::new();
        let shape: f64 = self.rng.gen();
        if shape < 0.15 {
            self.pp(&mut out);
            Self::chunk(&mut out, "O", vec![Self::w(",", ",")]);
        }
        let np = self.np();
        Self::chunk(&mut out, "NP", np);
        if self.rng.gen_bool(0.08) {
            let adv = self.z_adv.pick(&mut self.rng, ADVS);
            Self::chunk(&mut out, "ADVP", vec![Self::w(adv, "RB")]);
        }
        let vp = self.vp();
        Self::chunk(&mut out, "VP", vp);
        let tail: f64 = self.rng.gen();
        if tail < 0.55 {
            let np = self.np();
            Self::chunk(&mut out, "NP", np);
            if self.rng.gen_bool(0.35) {
                self.pp(&mut out);
            }
        } else if tail < 0.7 {
            self.pp(&mut out);
        } else if tail < 0.8 {
            let r = &mut self.rng;
            let mut adjp = Vec::new();
            if r.gen_bool(0.4) {
                adjp.push(Self::w(self.z_adv.pick(r, ADVS), "RB"));
            }
            adjp.push(Self::w(self.z_adj.pick(r, ADJS), "JJ"));
            Self::chunk(&mut out, "ADJP", adjp);
        } else if tail < 0.9 {
            Self::chunk(&mut out, "SBAR", vec![Self::w("that", "IN")]);
            let np = self.np();
            Self::chunk(&mut out, "NP", np);
            let vp = self.vp();
            Self::chunk(&mut out, "VP", vp);
        } else {
            let np = self.np();
            Self::chunk(&mut out, "NP", np);
            Self::chunk(&mut out, "O", vec![Self::w("and", "CC")]);
            let vp = self.vp();
            Self::chunk(&mut out, "VP", vp);
            let np = self.np();
            Self::chunk(&mut out, "NP", np);
        }
        Self::chunk(&mut out, "O", vec![Self::w(".", ".")]);
        out
    }

    /// `n` sentences in 3-column text, blank line after each sentence.
    pub fn conll(&mut self, n: usize) -> String {
        let mut text = String::new();
        for _ in 0..n {
            for (w, p, c) in self.sentence() {
                text.push_str(&format!("{w} {p} {c}\n"));
            }
            text.push('\n');
        }
        text
    }
}

pub fn conll(seed: u64, sentences: usize) -> String {
    SynthCorpus::new(seed).conll(sentences)
}
