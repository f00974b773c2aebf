//! BVH (Biovision hierarchy) reader.
//!
//! Only the subset needed for walking clips is accepted: one `ROOT`, nested
//! `JOINT` and `End Site` blocks, and a `MOTION` section whose rows are one
//! frame per line. Offsets and position channels are kept in the file's unit;
//! scaling happens in forward kinematics.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::skeleton::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BvhError {
    #[error("line {line}: missing HIERARCHY header")]
    MissingHierarchy { line: usize },
    #[error("line {line}: expected {expected}, found `{found}`")]
    UnexpectedToken { line: usize, expected: String, found: String },
    #[error("line {line}: unexpected end of file, expected {expected}")]
    UnexpectedEof { line: usize, expected: String },
    #[error("line {line}: unbalanced braces")]
    UnbalancedBraces { line: usize },
    #[error("line {line}: joint `{joint}` has no OFFSET")]
    MissingOffset { line: usize, joint: String },
    #[error("line {line}: joint `{joint}` has no CHANNELS")]
    MissingChannels { line: usize, joint: String },
    #[error("line {line}: unknown channel `{name}`")]
    UnknownChannel { line: usize, name: String },
    #[error("line {line}: `{token}` is not a number")]
    NonNumeric { line: usize, token: String },
    #[error("line {line}: frame time must be finite and positive")]
    InvalidFrameTime { line: usize },
    #[error("line {line}: MOTION declares {declared} frames but {found} rows follow")]
    FrameCountMismatch { line: usize, declared: usize, found: usize },
    #[error("line {line}: frame row has {found} values, hierarchy declares {expected} channels")]
    RowWidth { line: usize, expected: usize, found: usize },
    #[error("line {line}: hierarchy has more than one ROOT")]
    MultipleRoots { line: usize },
    #[error("invalid hierarchy: {0}")]
    Hierarchy(String),
}

impl BvhError {
    /// Source line the error refers to, when it has one.
    pub fn line(&self) -> Option<usize> {
        use BvhError::*;
        match self {
            MissingHierarchy { line }
            | UnexpectedToken { line, .. }
            | UnexpectedEof { line, .. }
            | UnbalancedBraces { line }
            | MissingOffset { line, .. }
            | MissingChannels { line, .. }
            | UnknownChannel { line, .. }
            | NonNumeric { line, .. }
            | InvalidFrameTime { line }
            | FrameCountMismatch { line, .. }
            | RowWidth { line, .. }
            | MultipleRoots { line } => Some(*line),
            Hierarchy(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Xposition,
    Yposition,
    Zposition,
    Xrotation,
    Yrotation,
    Zrotation,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::Xposition => "Xposition",
            Channel::Yposition => "Yposition",
            Channel::Zposition => "Zposition",
            Channel::Xrotation => "Xrotation",
            Channel::Yrotation => "Yrotation",
            Channel::Zrotation => "Zrotation",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "xposition" => Channel::Xposition,
            "yposition" => Channel::Yposition,
            "zposition" => Channel::Zposition,
            "xrotation" => Channel::Xrotation,
            "yrotation" => Channel::Yrotation,
            "zrotation" => Channel::Zrotation,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawJoint {
    pub name: String,
    pub parent: Option<usize>,
    pub offset: Vec3,
    pub channels: Vec<Channel>,
}

/// Joint tree in topological order: every parent precedes its children.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonHierarchy {
    joints: Vec<RawJoint>,
    channel_starts: Vec<usize>,
    channel_count: usize,
}

impl SkeletonHierarchy {
    pub fn new(joints: Vec<RawJoint>) -> Result<Self, BvhError> {
        let mut roots = 0;
        for (i, j) in joints.iter().enumerate() {
            match j.parent {
                None => roots += 1,
                Some(p) if p >= i => {
                    return Err(BvhError::Hierarchy(format!("joint `{}` listed before its parent", j.name)));
                }
                Some(_) => {}
            }
        }
        if roots != 1 {
            return Err(BvhError::Hierarchy(format!("expected exactly one root, found {roots}")));
        }
        let mut channel_starts = Vec::with_capacity(joints.len());
        let mut channel_count = 0;
        for j in &joints {
            channel_starts.push(channel_count);
            channel_count += j.channels.len();
        }
        Ok(SkeletonHierarchy { joints, channel_starts, channel_count })
    }

    pub fn joints(&self) -> &[RawJoint] {
        &self.joints
    }

    pub fn len(&self) -> usize {
        self.joints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }

    /// Total channel values per motion frame.
    pub fn channel_count(&self) -> usize {
        self.channel_count
    }

    /// Index of the first channel of `joint` within a frame row.
    pub fn channel_start(&self, joint: usize) -> usize {
        self.channel_starts[joint]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.joints.iter().position(|j| j.name == name)
    }

    pub fn names(&self) -> Vec<String> {
        self.joints.iter().map(|j| j.name.clone()).collect()
    }
}

/// A parsed BVH file.
#[derive(Debug, Clone, PartialEq)]
pub struct BvhClip {
    pub hierarchy: SkeletonHierarchy,
    pub motion: Vec<Vec<f64>>,
    /// Seconds per frame.
    pub frame_time: f64,
}

impl BvhClip {
    pub fn fps(&self) -> f64 {
        1.0 / self.frame_time
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
}

struct Tokens<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self, expected: &str) -> Result<&Token<'a>, BvhError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(BvhError::UnexpectedEof { line: self.last_line, expected: expected.into() }),
        }
    }

    fn expect(&mut self, word: &str) -> Result<usize, BvhError> {
        let t = self.next(word)?;
        if t.text.eq_ignore_ascii_case(word) {
            Ok(t.line)
        } else {
            Err(BvhError::UnexpectedToken { line: t.line, expected: format!("`{word}`"), found: t.text.into() })
        }
    }

    fn number(&mut self, what: &str) -> Result<f64, BvhError> {
        let t = self.next(what)?;
        parse_f64(t.text, t.line)
    }
}

fn parse_f64(text: &str, line: usize) -> Result<f64, BvhError> {
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| BvhError::NonNumeric { line, token: text.into() })
}

/// Parses BVH text into its hierarchy, per-frame channel values and frame time.
pub fn parse_bvh(text: &str) -> Result<BvhClip, BvhError> {
    let lines: Vec<&str> = text.lines().collect();

    // The hierarchy is tokenised as a stream up to the MOTION keyword; motion
    // rows are line-oriented.
    let mut tokens = Vec::new();
    let mut motion_line = None;
    'outer: for (i, line) in lines.iter().enumerate() {
        for word in line.split_whitespace() {
            if word.eq_ignore_ascii_case("MOTION") {
                motion_line = Some(i);
                break 'outer;
            }
            tokens.push(Token { text: word, line: i + 1 });
        }
    }
    let last_line = motion_line.map(|l| l + 1).unwrap_or(lines.len().max(1));
    let mut stream = Tokens { tokens, pos: 0, last_line };

    match stream.peek() {
        Some(t) if t.text.eq_ignore_ascii_case("HIERARCHY") => {
            stream.pos += 1;
        }
        Some(t) => return Err(BvhError::MissingHierarchy { line: t.line }),
        None => return Err(BvhError::MissingHierarchy { line: 1 }),
    }

    let mut joints = Vec::new();
    let root_line = stream.expect("ROOT")?;
    parse_joint_block(&mut stream, &mut joints, None, root_line)?;
    if let Some(t) = stream.peek() {
        return Err(match t.text {
            "}" => BvhError::UnbalancedBraces { line: t.line },
            w if w.eq_ignore_ascii_case("ROOT") => BvhError::MultipleRoots { line: t.line },
            w => BvhError::UnexpectedToken { line: t.line, expected: "`MOTION`".into(), found: w.into() },
        });
    }
    let hierarchy = SkeletonHierarchy::new(joints)?;

    let Some(motion_idx) = motion_line else {
        return Err(BvhError::UnexpectedEof { line: lines.len().max(1), expected: "`MOTION`".into() });
    };
    parse_motion(&lines, motion_idx, hierarchy)
}

fn parse_joint_block(
    stream: &mut Tokens<'_>,
    joints: &mut Vec<RawJoint>,
    parent: Option<usize>,
    header_line: usize,
) -> Result<(), BvhError> {
    let name = stream.next("joint name")?;
    let (name, name_line) = (name.text.to_string(), name.line);
    let open = stream.next("`{`")?;
    if open.text != "{" {
        return Err(BvhError::UnexpectedToken { line: open.line, expected: "`{`".into(), found: open.text.into() });
    }
    let open_line = open.line;

    let index = joints.len();
    joints.push(RawJoint { name: name.clone(), parent, offset: Vec3::zeros(), channels: Vec::new() });
    let mut offset_seen = false;
    let mut channels_seen = false;

    loop {
        let Some(tok) = stream.peek() else {
            return Err(BvhError::UnbalancedBraces { line: open_line });
        };
        let (word, line) = (tok.text, tok.line);
        stream.pos += 1;
        if word == "}" {
            break;
        } else if word.eq_ignore_ascii_case("OFFSET") {
            let x = stream.number("offset x")?;
            let y = stream.number("offset y")?;
            let z = stream.number("offset z")?;
            joints[index].offset = Vec3::new(x, y, z);
            offset_seen = true;
        } else if word.eq_ignore_ascii_case("CHANNELS") {
            let count = stream.next("channel count")?;
            let n: usize = count
                .text
                .parse()
                .map_err(|_| BvhError::NonNumeric { line: count.line, token: count.text.into() })?;
            let mut channels = Vec::with_capacity(n);
            for _ in 0..n {
                let c = stream.next("channel name")?;
                let ch = c
                    .text
                    .parse::<Channel>()
                    .map_err(|_| BvhError::UnknownChannel { line: c.line, name: c.text.into() })?;
                channels.push(ch);
            }
            joints[index].channels = channels;
            channels_seen = true;
        } else if word.eq_ignore_ascii_case("JOINT") {
            parse_joint_block(stream, joints, Some(index), line)?;
        } else if word.eq_ignore_ascii_case("End") {
            stream.expect("Site")?;
            parse_end_site(stream, joints, index, line)?;
        } else if word.eq_ignore_ascii_case("ROOT") {
            return Err(BvhError::MultipleRoots { line });
        } else {
            return Err(BvhError::UnexpectedToken { line, expected: "OFFSET, CHANNELS, JOINT, End Site or `}`".into(), found: word.into() });
        }
    }

    if !offset_seen {
        return Err(BvhError::MissingOffset { line: name_line.max(header_line), joint: name });
    }
    if !channels_seen {
        return Err(BvhError::MissingChannels { line: name_line.max(header_line), joint: name });
    }
    Ok(())
}

fn parse_end_site(stream: &mut Tokens<'_>, joints: &mut Vec<RawJoint>, parent: usize, line: usize) -> Result<(), BvhError> {
    let open = stream.next("`{`")?;
    if open.text != "{" {
        return Err(BvhError::UnexpectedToken { line: open.line, expected: "`{`".into(), found: open.text.into() });
    }
    let open_line = open.line;
    let name = format!("{}_End", joints[parent].name);
    let mut offset = None;
    loop {
        let Some(tok) = stream.peek() else {
            return Err(BvhError::UnbalancedBraces { line: open_line });
        };
        let (word, tline) = (tok.text, tok.line);
        stream.pos += 1;
        if word == "}" {
            break;
        } else if word.eq_ignore_ascii_case("OFFSET") {
            let x = stream.number("offset x")?;
            let y = stream.number("offset y")?;
            let z = stream.number("offset z")?;
            offset = Some(Vec3::new(x, y, z));
        } else {
            return Err(BvhError::UnexpectedToken { line: tline, expected: "OFFSET or `}`".into(), found: word.into() });
        }
    }
    let offset = offset.ok_or(BvhError::MissingOffset { line, joint: name.clone() })?;
    joints.push(RawJoint { name, parent: Some(parent), offset, channels: Vec::new() });
    Ok(())
}

fn parse_motion(lines: &[&str], motion_idx: usize, hierarchy: SkeletonHierarchy) -> Result<BvhClip, BvhError> {
    // Header lines: "Frames: N" and "Frame Time: t", possibly with other text
    // after MOTION on the same line (rare, tolerated when empty).
    let mut cursor = motion_idx + 1;
    let next_nonempty = |cursor: &mut usize| -> Option<(usize, &str)> {
        while *cursor < lines.len() {
            let l = lines[*cursor].trim();
            *cursor += 1;
            if !l.is_empty() {
                return Some((*cursor, l));
            }
        }
        None
    };

    let eof = lines.len().max(1);
    let (frames_line, frames_text) =
        next_nonempty(&mut cursor).ok_or(BvhError::UnexpectedEof { line: eof, expected: "`Frames:`".into() })?;
    let declared = header_value(frames_text, "Frames:", frames_line)?;
    let declared: usize = declared
        .parse()
        .map_err(|_| BvhError::NonNumeric { line: frames_line, token: declared.into() })?;

    let (time_line, time_text) =
        next_nonempty(&mut cursor).ok_or(BvhError::UnexpectedEof { line: eof, expected: "`Frame Time:`".into() })?;
    let time_value = header_value(time_text, "Frame Time:", time_line)?;
    let frame_time = parse_f64(time_value, time_line)?;
    if frame_time <= 0.0 {
        return Err(BvhError::InvalidFrameTime { line: time_line });
    }

    let width = hierarchy.channel_count();
    let mut motion = Vec::with_capacity(declared);
    let mut last_row_line = time_line;
    while let Some((line, text)) = next_nonempty(&mut cursor) {
        last_row_line = line;
        let row = text.split_whitespace().map(|t| parse_f64(t, line)).collect::<Result<Vec<f64>, _>>()?;
        if row.len() != width {
            return Err(BvhError::RowWidth { line, expected: width, found: row.len() });
        }
        motion.push(row);
    }
    // Zero-channel skeletons have empty rows, which cannot be counted.
    if width == 0 && motion.is_empty() {
        motion = vec![Vec::new(); declared];
    }
    if motion.len() != declared {
        return Err(BvhError::FrameCountMismatch { line: last_row_line, declared, found: motion.len() });
    }
    Ok(BvhClip { hierarchy, motion, frame_time })
}

fn header_value<'a>(text: &'a str, key: &str, line: usize) -> Result<&'a str, BvhError> {
    let lowered = text.to_ascii_lowercase();
    let key_l = key.to_ascii_lowercase();
    // Accept both "Frame Time: x" and "Frame Time:x" with arbitrary inner spacing.
    let collapsed: String = lowered.split_whitespace().collect::<Vec<_>>().join(" ");
    if !collapsed.starts_with(&key_l) {
        return Err(BvhError::UnexpectedToken { line, expected: format!("`{key}`"), found: text.into() });
    }
    let colon = text.find(':').expect("key contains a colon");
    let rest = text[colon + 1..].trim();
    if rest.is_empty() || rest.split_whitespace().count() != 1 {
        return Err(BvhError::NonNumeric { line, token: rest.into() });
    }
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "HIERARCHY\nROOT Hips\n{\n  OFFSET 0 1 0\n  CHANNELS 0\n}\nMOTION\nFrames: 2\nFrame Time: 0.0333333\n\n\n";

    #[test]
    fn minimal_file() {
        let clip = parse_bvh(MINIMAL).unwrap();
        assert_eq!(clip.hierarchy.len(), 1);
        assert_eq!(clip.hierarchy.joints()[0].offset, Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(clip.frame_time, 0.0333333);
        assert_eq!(clip.motion, vec![Vec::<f64>::new(); 2]);
    }

    #[test]
    fn end_site_becomes_joint() {
        let text = "HIERARCHY\nROOT A\n{\nOFFSET 0 0 0\nCHANNELS 3 Xposition Yposition Zposition\nEnd Site\n{\nOFFSET 0 1 0\n}\n}\nMOTION\nFrames: 1\nFrame Time: 0.1\n1 2 3\n";
        let clip = parse_bvh(text).unwrap();
        assert_eq!(clip.hierarchy.names(), vec!["A", "A_End"]);
        assert_eq!(clip.hierarchy.joints()[1].parent, Some(0));
        assert_eq!(clip.motion, vec![vec![1.0, 2.0, 3.0]]);
    }

    #[test]
    fn frame_time_must_be_positive() {
        let text = "HIERARCHY\nROOT A\n{\nOFFSET 0 0 0\nCHANNELS 0\n}\nMOTION\nFrames: 0\nFrame Time: 0\n";
        assert_eq!(parse_bvh(text).unwrap_err(), BvhError::InvalidFrameTime { line: 9 });
    }

    #[test]
    fn unknown_channel_reported() {
        let text = "HIERARCHY\nROOT A\n{\nOFFSET 0 0 0\nCHANNELS 1 Wrotation\n}\nMOTION\nFrames: 0\nFrame Time: 0.1\n";
        assert_eq!(parse_bvh(text).unwrap_err(), BvhError::UnknownChannel { line: 5, name: "Wrotation".into() });
    }

    #[test]
    fn second_root_rejected() {
        let text = "HIERARCHY\nROOT A\n{\nOFFSET 0 0 0\nCHANNELS 0\n}\nROOT B\n{\nOFFSET 0 0 0\nCHANNELS 0\n}\nMOTION\nFrames: 0\nFrame Time: 0.1\n";
        assert_eq!(parse_bvh(text).unwrap_err(), BvhError::MultipleRoots { line: 7 });
    }

    #[test]
    fn hierarchy_requires_topological_order() {
        let j = |name: &str, parent| RawJoint { name: name.into(), parent, offset: Vec3::zeros(), channels: vec![] };
        assert!(SkeletonHierarchy::new(vec![j("a", None), j("b", Some(0))]).is_ok());
        assert!(SkeletonHierarchy::new(vec![j("b", Some(1)), j("a", None)]).is_err());
        assert!(SkeletonHierarchy::new(vec![j("a", None), j("b", None)]).is_err());
    }
}
