//! JSON position documents: `{"n": 6, "green": [[0,1]], "red": []}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{BoardError, Color, Position};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed position document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("to_move is {given} but the edge counts give {derived}")]
    ToMoveMismatch { given: Color, derived: Color },
    #[error(transparent)]
    Board(#[from] BoardError),
}

/// Wire shape of a position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionDoc {
    pub n: usize,
    pub green: Vec<[usize; 2]>,
    pub red: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to_move: Option<Color>,
}

impl PositionDoc {
    /// Validated position. Accepts pairs in any list order and rejects duplicates.
    pub fn to_position(&self) -> Result<Position, FormatError> {
        let green: Vec<_> = self.green.iter().map(|&[a, b]| (a, b)).collect();
        let red: Vec<_> = self.red.iter().map(|&[a, b]| (a, b)).collect();
        let p = Position::from_edge_lists(self.n, &green, &red)?;
        if let Some(given) = self.to_move {
            let derived = p.player_to_move();
            if given != derived {
                return Err(FormatError::ToMoveMismatch { given, derived });
            }
        }
        Ok(p)
    }
}

impl From<&Position> for PositionDoc {
    fn from(p: &Position) -> Self {
        let pairs = |c| p.pairs(c).into_iter().map(|(a, b)| [a, b]).collect();
        PositionDoc { n: p.n(), green: pairs(Color::Green), red: pairs(Color::Red), to_move: None }
    }
}

/// Parses a position document and validates it as a live-input position.
pub fn parse_position(text: &str) -> Result<Position, FormatError> {
    let doc: PositionDoc = serde_json::from_str(text)?;
    doc.to_position()
}

/// Compact JSON with pairs sorted lexicographically.
pub fn position_to_json(p: &Position) -> String {
    serde_json::to_string(&PositionDoc::from(p)).expect("position document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_is_sorted_and_compact() {
        let p = parse_position(r#"{"n":5,"green":[[3,4],[0,1],[1,2],[0,4],[2,3]],"red":[[2,4],[0,2],[1,3],[0,3],[1,4]]}"#)
            .unwrap();
        assert_eq!(
            position_to_json(&p),
            r#"{"n":5,"green":[[0,1],[0,4],[1,2],[2,3],[3,4]],"red":[[0,2],[0,3],[1,3],[1,4],[2,4]]}"#
        );
    }

    #[test]
    fn to_move_must_match() {
        assert!(parse_position(r#"{"n":6,"green":[],"red":[],"to_move":"green"}"#).is_ok());
        let err = parse_position(r#"{"n":6,"green":[],"red":[],"to_move":"red"}"#).unwrap_err();
        assert!(matches!(err, FormatError::ToMoveMismatch { .. }));
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        let err = parse_position(r#"{"n":6,"green":[[0,1]],"red":[[0,1]]}"#).unwrap_err();
        assert!(matches!(err, FormatError::Board(BoardError::DuplicateEdge(0, 1))));
        assert!(matches!(parse_position("not json").unwrap_err(), FormatError::Json(_)));
        assert!(matches!(parse_position(r#"{"n":6}"#).unwrap_err(), FormatError::Json(_)));
        assert!(matches!(
            parse_position(r#"{"n":6,"green":[],"red":[],"extra":1}"#).unwrap_err(),
            FormatError::Json(_)
        ));
    }
}
