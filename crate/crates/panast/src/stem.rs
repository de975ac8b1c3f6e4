//! English suffix-stripping stemmer (Porter's algorithm, in the common
//! reference variant with the `bli`/`logi` rules).
//!
//! The same function is applied to lexicon terms and to tweet tokens, so a
//! tweet token like `scared` and the scale term `scared` reduce to the same
//! key, `scare`. Tokens that are not pure ASCII letters (hashtag remnants,
//! numbers like `a330` or `447`, non-Latin words) are returned unchanged;
//! suffix rules only make sense for English words.

// The step functions keep the reference algorithm's switch-on-letter branch
// layout; flattening the arms would make diffing against it harder.
#![allow(clippy::collapsible_match, clippy::if_same_then_else)]

/// Stems one lowercase token. Deterministic and idempotent over the bundled
/// vocabulary (asserted in tests).
pub fn stem(token: &str) -> String {
    if token.len() <= 2 || !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return token.to_string();
    }
    let mut p = Porter {
        b: token.as_bytes().to_vec(),
        k: token.len() - 1,
        j: 0,
    };
    p.step1ab();
    p.step1c();
    p.step2();
    p.step3();
    p.step4();
    p.step5();
    p.b.truncate(p.k + 1);
    // Buffer stays ASCII throughout.
    String::from_utf8(p.b).expect("stemmer operates on ASCII")
}

/// Working state: `b[0..=k]` is the current word, `j` marks the stem end
/// set by the most recent successful suffix match.
struct Porter {
    b: Vec<u8>,
    k: usize,
    j: usize,
}

impl Porter {
    fn is_consonant(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => {
                if i == 0 {
                    true
                } else {
                    !self.is_consonant(i - 1)
                }
            }
            _ => true,
        }
    }

    /// Number of vowel-consonant sequences in `b[0..=j]`.
    fn measure(&self) -> usize {
        let mut n = 0;
        let mut i = 0;
        loop {
            if i > self.j {
                return n;
            }
            if !self.is_consonant(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i > self.j {
                    return n;
                }
                if self.is_consonant(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i > self.j {
                    return n;
                }
                if !self.is_consonant(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn vowel_in_stem(&self) -> bool {
        (0..=self.j).any(|i| !self.is_consonant(i))
    }

    fn double_consonant(&self, i: usize) -> bool {
        i >= 1 && self.b[i] == self.b[i - 1] && self.is_consonant(i)
    }

    /// consonant-vowel-consonant ending at `i`, final consonant not w, x, y.
    fn cvc(&self, i: usize) -> bool {
        if i < 2 || !self.is_consonant(i) || self.is_consonant(i - 1) || !self.is_consonant(i - 2) {
            return false;
        }
        !matches!(self.b[i], b'w' | b'x' | b'y')
    }

    /// Does `b[0..=k]` end with `s`, leaving a non-empty stem? On success
    /// `j` is set to the stem end.
    fn ends(&mut self, s: &[u8]) -> bool {
        let len = s.len();
        if len > self.k || &self.b[self.k + 1 - len..=self.k] != s {
            return false;
        }
        self.j = self.k - len;
        true
    }

    /// Replaces `b[j+1..=k]` with `s`.
    fn set_to(&mut self, s: &[u8]) {
        self.b.truncate(self.j + 1);
        self.b.extend_from_slice(s);
        self.k = self.j + s.len();
    }

    /// `set_to` guarded by measure > 0.
    fn replace(&mut self, s: &[u8]) {
        if self.measure() > 0 {
            self.set_to(s);
        }
    }

    /// Plural and -ed / -ing removal.
    fn step1ab(&mut self) {
        if self.b[self.k] == b's' {
            if self.ends(b"sses") {
                self.k -= 2;
            } else if self.ends(b"ies") {
                self.set_to(b"i");
            } else if self.b[self.k - 1] != b's' {
                self.k -= 1;
            }
        }
        if self.ends(b"eed") {
            if self.measure() > 0 {
                self.k -= 1;
            }
        } else if (self.ends(b"ed") || self.ends(b"ing")) && self.vowel_in_stem() {
            self.k = self.j;
            if self.ends(b"at") {
                self.set_to(b"ate");
            } else if self.ends(b"bl") {
                self.set_to(b"ble");
            } else if self.ends(b"iz") {
                self.set_to(b"ize");
            } else if self.double_consonant(self.k) {
                self.k -= 1;
                if matches!(self.b[self.k], b'l' | b's' | b'z') {
                    self.k += 1;
                }
            } else if self.measure() == 1 && self.cvc(self.k) {
                self.set_to(b"e");
            }
        }
    }

    /// Turns terminal y into i when there is a vowel in the stem.
    fn step1c(&mut self) {
        if self.ends(b"y") && self.vowel_in_stem() {
            self.b[self.k] = b'i';
        }
    }

    /// Maps double suffixes to single ones (-ization -> -ize, etc).
    fn step2(&mut self) {
        if self.k == 0 {
            return;
        }
        match self.b[self.k - 1] {
            b'a' => {
                if self.ends(b"ational") {
                    self.replace(b"ate");
                } else if self.ends(b"tional") {
                    self.replace(b"tion");
                }
            }
            b'c' => {
                if self.ends(b"enci") {
                    self.replace(b"ence");
                } else if self.ends(b"anci") {
                    self.replace(b"ance");
                }
            }
            b'e' => {
                if self.ends(b"izer") {
                    self.replace(b"ize");
                }
            }
            b'l' => {
                if self.ends(b"bli") {
                    self.replace(b"ble");
                } else if self.ends(b"alli") {
                    self.replace(b"al");
                } else if self.ends(b"entli") {
                    self.replace(b"ent");
                } else if self.ends(b"eli") {
                    self.replace(b"e");
                } else if self.ends(b"ousli") {
                    self.replace(b"ous");
                }
            }
            b'o' => {
                if self.ends(b"ization") {
                    self.replace(b"ize");
                } else if self.ends(b"ation") {
                    self.replace(b"ate");
                } else if self.ends(b"ator") {
                    self.replace(b"ate");
                }
            }
            b's' => {
                if self.ends(b"alism") {
                    self.replace(b"al");
                } else if self.ends(b"iveness") {
                    self.replace(b"ive");
                } else if self.ends(b"fulness") {
                    self.replace(b"ful");
                } else if self.ends(b"ousness") {
                    self.replace(b"ous");
                }
            }
            b't' => {
                if self.ends(b"aliti") {
                    self.replace(b"al");
                } else if self.ends(b"iviti") {
                    self.replace(b"ive");
                } else if self.ends(b"biliti") {
                    self.replace(b"ble");
                }
            }
            b'g' => {
                if self.ends(b"logi") {
                    self.replace(b"log");
                }
            }
            _ => {}
        }
    }

    /// -icate, -ful, -ness etc.
    fn step3(&mut self) {
        match self.b[self.k] {
            b'e' => {
                if self.ends(b"icate") {
                    self.replace(b"ic");
                } else if self.ends(b"ative") {
                    self.replace(b"");
                } else if self.ends(b"alize") {
                    self.replace(b"al");
                }
            }
            b'i' => {
                if self.ends(b"iciti") {
                    self.replace(b"ic");
                }
            }
            b'l' => {
                if self.ends(b"ical") {
                    self.replace(b"ic");
                } else if self.ends(b"ful") {
                    self.replace(b"");
                }
            }
            b's' => {
                if self.ends(b"ness") {
                    self.replace(b"");
                }
            }
            _ => {}
        }
    }

    /// Drops -ant, -ence etc. in longer stems.
    fn step4(&mut self) {
        if self.k == 0 {
            return;
        }
        let matched = match self.b[self.k - 1] {
            b'a' => self.ends(b"al"),
            b'c' => self.ends(b"ance") || self.ends(b"ence"),
            b'e' => self.ends(b"er"),
            b'i' => self.ends(b"ic"),
            b'l' => self.ends(b"able") || self.ends(b"ible"),
            b'n' => {
                self.ends(b"ant") || self.ends(b"ement") || self.ends(b"ment") || self.ends(b"ent")
            }
            b'o' => {
                (self.ends(b"ion") && matches!(self.b[self.j], b's' | b't')) || self.ends(b"ou")
            }
            b's' => self.ends(b"ism"),
            b't' => self.ends(b"ate") || self.ends(b"iti"),
            b'u' => self.ends(b"ous"),
            b'v' => self.ends(b"ive"),
            b'z' => self.ends(b"ize"),
            _ => false,
        };
        if matched && self.measure() > 1 {
            self.k = self.j;
        }
    }

    /// Removes a final -e and collapses -ll in longer stems.
    fn step5(&mut self) {
        self.j = self.k;
        if self.b[self.k] == b'e' {
            let m = self.measure();
            if m > 1 || (m == 1 && !self.cvc(self.k - 1)) {
                self.k -= 1;
            }
        }
        if self.b[self.k] == b'l' && self.double_consonant(self.k) && self.measure() > 1 {
            self.k -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::stem;

    #[test]
    fn classic_suffix_families() {
        let cases = [
            ("caresses", "caress"),
            ("ponies", "poni"),
            ("ties", "ti"),
            ("caress", "caress"),
            ("cats", "cat"),
            ("feed", "feed"),
            ("agreed", "agre"),
            ("plastered", "plaster"),
            ("bled", "bled"),
            ("motoring", "motor"),
            ("sing", "sing"),
            ("conflated", "conflat"),
            ("troubled", "troubl"),
            ("sized", "size"),
            ("hopping", "hop"),
            ("tanned", "tan"),
            ("falling", "fall"),
            ("hissing", "hiss"),
            ("fizzed", "fizz"),
            ("failing", "fail"),
            ("filing", "file"),
            ("happy", "happi"),
            ("sky", "sky"),
            ("relational", "relat"),
            ("conditional", "condit"),
            ("rational", "ration"),
            ("valenci", "valenc"),
            ("digitizer", "digit"),
            ("radicalli", "radic"),
            ("differentli", "differ"),
            ("vileli", "vile"),
            ("analogousli", "analog"),
            ("vietnamization", "vietnam"),
            ("predication", "predic"),
            ("operator", "oper"),
            ("feudalism", "feudal"),
            ("decisiveness", "decis"),
            ("hopefulness", "hope"),
            ("callousness", "callous"),
            ("formaliti", "formal"),
            ("sensitiviti", "sensit"),
            ("sensibiliti", "sensibl"),
            ("triplicate", "triplic"),
            ("formative", "form"),
            ("formalize", "formal"),
            ("electriciti", "electr"),
            ("electrical", "electr"),
            ("hopeful", "hope"),
            ("goodness", "good"),
            ("revival", "reviv"),
            ("allowance", "allow"),
            ("inference", "infer"),
            ("airliner", "airlin"),
            ("gyroscopic", "gyroscop"),
            ("adjustable", "adjust"),
            ("defensible", "defens"),
            ("irritant", "irrit"),
            ("replacement", "replac"),
            ("adjustment", "adjust"),
            ("dependent", "depend"),
            ("adoption", "adopt"),
            ("communism", "commun"),
            ("activate", "activ"),
            ("angulariti", "angular"),
            ("homologous", "homolog"),
            ("effective", "effect"),
            ("bowdlerize", "bowdler"),
            ("probate", "probat"),
            ("rate", "rate"),
            ("cease", "ceas"),
            ("controll", "control"),
            ("roll", "roll"),
        ];
        for (input, expected) in cases {
            assert_eq!(stem(input), expected, "stem({input:?})");
        }
    }

    #[test]
    fn worked_example_tokens() {
        assert_eq!(stem("scared"), "scare");
        assert_eq!(stem("flu"), "flu");
        assert_eq!(stem("swine"), "swine");
        assert_eq!(stem("i"), "i");
        assert_eq!(stem("am"), "am");
        assert_eq!(stem("so"), "so");
        assert_eq!(stem("about"), "about");
    }

    #[test]
    fn non_letter_tokens_pass_through() {
        assert_eq!(stem("a330"), "a330");
        assert_eq!(stem("447"), "447");
        assert_eq!(stem("h1n1"), "h1n1");
        assert_eq!(stem("café"), "café");
        assert_eq!(stem(""), "");
    }

    #[test]
    fn short_tokens_unchanged() {
        assert_eq!(stem("be"), "be");
        assert_eq!(stem("is"), "is");
        assert_eq!(stem("as"), "as");
    }
}
