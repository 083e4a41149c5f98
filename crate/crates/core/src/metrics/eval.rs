use std::cell::RefCell;
use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AnswerOutcome, QAItem};

/// Reply an answering client gives when the caption does not support any option.
pub const REFUSAL_TOKEN: &str = "REFUSE";

/// Attempts per question before a transport failure is recorded as a refusal.
pub const MAX_ATTEMPTS: u32 = 3;

const LETTERS: [char; 4] = ['A', 'B', 'C', 'D'];

/// What an answering client is asked: a caption plus one question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnswerRequest<'a> {
    pub caption: &'a str,
    pub question: &'a str,
    pub options: &'a [String; 4],
}

/// Transport-level failure, distinct from a refusal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("answering client failed: {0}")]
pub struct ClientError(pub String);

pub trait AnswerClient {
    fn answer(&self, request: &AnswerRequest<'_>) -> Result<String, ClientError>;
}

/// Client that plays back a fixed sequence of replies.
#[derive(Debug, Default)]
pub struct ScriptedClient {
    replies: RefCell<VecDeque<Result<String, ClientError>>>,
    seen: RefCell<Vec<String>>,
}

impl ScriptedClient {
    pub fn new<I>(replies: I) -> Self
    where
        I: IntoIterator<Item = Result<String, ClientError>>,
    {
        Self {
            replies: RefCell::new(replies.into_iter().collect()),
            seen: RefCell::new(Vec::new()),
        }
    }

    pub fn replying<S: Into<String>>(replies: impl IntoIterator<Item = S>) -> Self {
        Self::new(replies.into_iter().map(|s| Ok(s.into())))
    }

    /// Questions received so far.
    pub fn questions(&self) -> Vec<String> {
        self.seen.borrow().clone()
    }
}

impl AnswerClient for ScriptedClient {
    fn answer(&self, request: &AnswerRequest<'_>) -> Result<String, ClientError> {
        self.seen.borrow_mut().push(request.question.to_string());
        self.replies
            .borrow_mut()
            .pop_front()
            .unwrap_or_else(|| Err(ClientError("script exhausted".into())))
    }
}

fn letter_index(c: char) -> Option<usize> {
    LETTERS.iter().position(|l| *l == c.to_ascii_uppercase())
}

/// Map a reply to an outcome.
///
/// A reply that is a single letter A-D (optionally followed by `.`, `)` or
/// `:`) is taken as is. Otherwise the first parenthesized capital letter
/// `(A)`..`(D)` counts. Anything else, including [`REFUSAL_TOKEN`], is a refusal.
pub fn parse_reply(reply: &str) -> AnswerOutcome {
    let t = reply.trim();
    let core = t.trim_end_matches(['.', ')', ':']).trim_start_matches('(');
    let mut chars = core.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if let Some(i) = letter_index(c) {
            return AnswerOutcome::Choice(i);
        }
    }
    let b = t.as_bytes();
    for w in b.windows(3) {
        if w[0] == b'(' && w[2] == b')' && (b'A'..=b'D').contains(&w[1]) {
            return AnswerOutcome::Choice((w[1] - b'A') as usize);
        }
    }
    AnswerOutcome::Refusal
}

/// Outcome of one question plus what is needed to audit it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRound {
    pub outcome: AnswerOutcome,
    /// Last reply received, if any.
    pub raw_reply: Option<String>,
    pub attempts: u32,
    /// Why the outcome is a refusal, when it is one.
    pub reason: Option<String>,
}

/// Ask `client` one question about `caption` and parse the reply, retrying
/// transport failures up to [`MAX_ATTEMPTS`] times.
pub fn caption_eval_round<C: AnswerClient + ?Sized>(caption: &str, item: &QAItem, client: &C) -> EvalRound {
    let request = AnswerRequest {
        caption,
        question: &item.question,
        options: &item.options,
    };
    for attempt in 1..=MAX_ATTEMPTS {
        let Ok(reply) = client.answer(&request) else {
            continue;
        };
        let outcome = parse_reply(&reply);
        let reason = match outcome {
            AnswerOutcome::Choice(_) => None,
            AnswerOutcome::Refusal if reply.trim() == REFUSAL_TOKEN => Some("refused".to_string()),
            AnswerOutcome::Refusal => Some("unparseable reply".to_string()),
        };
        return EvalRound {
            outcome,
            raw_reply: Some(reply),
            attempts: attempt,
            reason,
        };
    }
    EvalRound {
        outcome: AnswerOutcome::Refusal,
        raw_reply: None,
        attempts: MAX_ATTEMPTS,
        reason: Some("client failure".to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::QACategory;
    use AnswerOutcome::{Choice, Refusal};

    fn item() -> QAItem {
        QAItem::new(QACategory::Interaction, "Who does she hug?", ["a boy", "a dog", "a man", "nobody"], 2).unwrap()
    }

    #[test]
    fn reply_shapes() {
        let cases: [(&str, AnswerOutcome); 20] = [
            ("C", Choice(2)),
            ("A", Choice(0)),
            ("d", Choice(3)),
            (" B \n", Choice(1)),
            ("B.", Choice(1)),
            ("(A)", Choice(0)),
            ("D)", Choice(3)),
            ("C:", Choice(2)),
            ("The answer is (B) because the man waves.", Choice(1)),
            ("I think (D).", Choice(3)),
            ("(C) a man", Choice(2)),
            ("Between (A) and (C), (C) fits", Choice(0)),
            (REFUSAL_TOKEN, Refusal),
            ("  REFUSE\n", Refusal),
            ("E", Refusal),
            ("", Refusal),
            ("The answer is B", Refusal),
            ("(E) none of these", Refusal),
            ("(b) lowercase in parentheses", Refusal),
            ("AB", Refusal),
        ];
        for (reply, want) in cases {
            assert_eq!(parse_reply(reply), want, "{reply:?}");
        }
    }

    #[test]
    fn round_maps_letters_and_refusals() {
        let it = item();
        let r = caption_eval_round("A woman hugs a man.", &it, &ScriptedClient::replying(["C"]));
        assert_eq!((r.outcome, r.attempts, r.reason.as_deref()), (Choice(2), 1, None));

        let r = caption_eval_round("", &it, &ScriptedClient::replying([REFUSAL_TOKEN]));
        assert_eq!(r.outcome, Refusal);
        assert_eq!(r.reason.as_deref(), Some("refused"));
        assert_eq!(r.raw_reply.as_deref(), Some(REFUSAL_TOKEN));
    }

    #[test]
    fn retries_then_gives_up() {
        let it = item();
        let flaky = ScriptedClient::new([Err(ClientError("timeout".into())), Ok("(B)".into())]);
        let r = caption_eval_round("c", &it, &flaky);
        assert_eq!((r.outcome, r.attempts), (Choice(1), 2));

        let down = ScriptedClient::new((0..5).map(|_| Err(ClientError("down".into()))));
        let r = caption_eval_round("c", &it, &down);
        assert_eq!(r.outcome, Refusal);
        assert_eq!(r.attempts, MAX_ATTEMPTS);
        assert_eq!(r.reason.as_deref(), Some("client failure"));
        assert_eq!(down.questions().len(), MAX_ATTEMPTS as usize);
    }
}
