//! BVH (Biovision hierarchy) reader.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::anim::{AnimationClip, Frame, Joint, Skeleton, UpAxis};
use crate::{ParseError, Quat, Vec3};

type ParseResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Channel {
    Xposition,
    Yposition,
    Zposition,
    Xrotation,
    Yrotation,
    Zrotation,
}

impl Channel {
    fn parse(token: &str) -> Option<Self> {
        Some(match token {
            "Xposition" => Channel::Xposition,
            "Yposition" => Channel::Yposition,
            "Zposition" => Channel::Zposition,
            "Xrotation" => Channel::Xrotation,
            "Yrotation" => Channel::Yrotation,
            "Zrotation" => Channel::Zrotation,
            _ => return None,
        })
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
    fn new(text: &'a str) -> Self {
        let tokens = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| Token { text: t, line: i + 1 }))
            .collect();
        let last_line = text.lines().count().max(1);
        Self { tokens, pos: 0, last_line }
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn line(&self) -> usize {
        self.peek().map_or(self.last_line, |t| t.line)
    }

    fn next(&mut self, what: &str) -> ParseResult<&Token<'a>> {
        let line = self.line();
        let tok = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| ParseError::at_line(line, format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, keyword: &str) -> ParseResult<()> {
        let tok = self.next(keyword)?;
        if tok.text != keyword {
            return Err(ParseError::at_line(tok.line, format!("expected {keyword}, found {}", tok.text)));
        }
        Ok(())
    }

    fn float(&mut self, what: &str) -> ParseResult<f64> {
        let tok = self.next(what)?;
        parse_float(tok.text, tok.line)
    }
}

fn parse_float(text: &str, line: usize) -> ParseResult<f64> {
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ParseError::at_line(line, format!("invalid number {text:?}")))
}

struct RawJoint {
    name: String,
    parent: Option<usize>,
    offset: Vec3,
    channels: Vec<Channel>,
}

/// Parses a BVH document into a skeleton and a clip with id `"bvh"`.
///
/// Euler channels are composed intrinsically in declared order and stored as
/// quaternions. The root's OFFSET is folded into its translation. Position
/// channels on non-root joints are read but ignored. End Sites become leaf
/// joints named `<parent>_end`.
pub fn parse_bvh(text: &str) -> ParseResult<(Arc<Skeleton>, AnimationClip)> {
    let mut tokens = Tokens::new(text);
    tokens.expect("HIERARCHY")?;
    let root_tok = tokens.next("ROOT")?;
    if root_tok.text != "ROOT" {
        return Err(ParseError::at_line(root_tok.line, format!("expected ROOT, found {}", root_tok.text)));
    }
    let mut joints: Vec<RawJoint> = Vec::new();
    parse_joint_body(&mut tokens, &mut joints, None)?;

    match tokens.peek() {
        None => return Err(ParseError::at_line(tokens.line(), "no motion section")),
        Some(t) if t.text == "MOTION" => {
            tokens.pos += 1;
        }
        Some(t) => {
            return Err(ParseError::at_line(t.line, format!("expected MOTION, found {}", t.text)));
        }
    }

    tokens.expect("Frames:")?;
    let frames_tok = tokens.next("frame count")?;
    let frame_count: usize = frames_tok
        .text
        .parse()
        .map_err(|_| ParseError::at_line(frames_tok.line, format!("invalid frame count {:?}", frames_tok.text)))?;
    if frame_count == 0 {
        return Err(ParseError::at_line(frames_tok.line, "clip has zero frames"));
    }
    tokens.expect("Frame")?;
    tokens.expect("Time:")?;
    let time_line = tokens.line();
    let frame_time = tokens.float("frame time")?;
    if frame_time <= 0.0 {
        return Err(ParseError::at_line(time_line, "frame time must be positive"));
    }
    let fps = (1.0 / frame_time).round().max(1.0);

    let channel_count: usize = joints.iter().map(|j| j.channels.len()).sum();
    let values: Vec<(f64, usize)> = tokens.tokens[tokens.pos..]
        .iter()
        .map(|t| parse_float(t.text, t.line).map(|v| (v, t.line)))
        .collect::<ParseResult<_>>()?;
    let expected = frame_count * channel_count;
    if values.len() != expected {
        // Point at the first frame line whose value count is off, else the end of data.
        let mut per_line: BTreeMap<usize, usize> = BTreeMap::new();
        for (_, line) in &values {
            *per_line.entry(*line).or_default() += 1;
        }
        let line = per_line
            .iter()
            .find(|(_, &n)| n != channel_count)
            .map(|(&l, _)| l)
            .unwrap_or_else(|| values.last().map_or(tokens.last_line, |v| v.1));
        return Err(ParseError::at_line(
            line,
            format!(
                "expected {expected} motion values ({frame_count} frames x {channel_count} channels), found {}",
                values.len()
            ),
        ));
    }

    let skeleton_joints: Vec<Joint> = joints
        .iter()
        .map(|j| Joint::new(j.name.clone(), j.parent, if j.parent.is_none() { Vec3::zeros() } else { j.offset }))
        .collect();
    let chains = branch_chains(&joints);
    let skeleton = Arc::new(
        Skeleton::new(skeleton_joints, UpAxis::Y, chains).map_err(|e| ParseError::new(e.to_string()))?,
    );

    let root_offset = joints[0].offset;
    let frames = values
        .chunks(channel_count.max(1))
        .take(frame_count)
        .map(|row| {
            let mut cursor = row.iter().map(|(v, _)| *v);
            let mut frame = Frame::identity(joints.len());
            frame.root_translation = root_offset;
            for (i, joint) in joints.iter().enumerate() {
                let mut rotation = Quat::identity();
                for channel in &joint.channels {
                    let v = cursor.next().unwrap_or(0.0);
                    match channel {
                        Channel::Xposition if i == 0 => frame.root_translation.x += v,
                        Channel::Yposition if i == 0 => frame.root_translation.y += v,
                        Channel::Zposition if i == 0 => frame.root_translation.z += v,
                        Channel::Xposition | Channel::Yposition | Channel::Zposition => {}
                        Channel::Xrotation => rotation *= Quat::from_axis_angle(&Vec3::x_axis(), v.to_radians()),
                        Channel::Yrotation => rotation *= Quat::from_axis_angle(&Vec3::y_axis(), v.to_radians()),
                        Channel::Zrotation => rotation *= Quat::from_axis_angle(&Vec3::z_axis(), v.to_radians()),
                    }
                }
                frame.rotations[i] = rotation;
            }
            frame
        })
        .collect();
    // Zero-channel hierarchies still yield `frame_count` identity frames.
    let frames = if channel_count == 0 {
        let mut f = Frame::identity(joints.len());
        f.root_translation = root_offset;
        vec![f; frame_count]
    } else {
        frames
    };

    let clip = AnimationClip::new("bvh", skeleton.clone(), fps, frames)
        .map_err(|e| ParseError::new(e.to_string()))?;
    Ok((skeleton, clip))
}

/// Parses `name { OFFSET .. CHANNELS .. children }` after ROOT/JOINT.
fn parse_joint_body(tokens: &mut Tokens<'_>, joints: &mut Vec<RawJoint>, parent: Option<usize>) -> ParseResult<()> {
    let name_tok = tokens.next("joint name")?;
    if name_tok.text == "{" {
        return Err(ParseError::at_line(name_tok.line, "joint is missing a name"));
    }
    let name = name_tok.text.to_string();
    tokens.expect("{")?;
    tokens.expect("OFFSET")?;
    let offset = Vec3::new(tokens.float("offset")?, tokens.float("offset")?, tokens.float("offset")?);
    let index = joints.len();
    joints.push(RawJoint { name, parent, offset, channels: Vec::new() });

    loop {
        let tok = tokens.next("}")?;
        let line = tok.line;
        match tok.text {
            "CHANNELS" => {
                let count_tok = tokens.next("channel count")?;
                let count: usize = count_tok
                    .text
                    .parse()
                    .map_err(|_| ParseError::at_line(count_tok.line, format!("invalid channel count {:?}", count_tok.text)))?;
                let mut channels = Vec::with_capacity(count);
                for _ in 0..count {
                    let ch = tokens.next("channel name")?;
                    channels.push(Channel::parse(ch.text).ok_or_else(|| {
                        ParseError::at_line(ch.line, format!("unknown channel {:?}", ch.text))
                    })?);
                }
                joints[index].channels = channels;
            }
            "JOINT" => parse_joint_body(tokens, joints, Some(index))?,
            "End" => {
                tokens.expect("Site")?;
                tokens.expect("{")?;
                tokens.expect("OFFSET")?;
                let offset = Vec3::new(tokens.float("offset")?, tokens.float("offset")?, tokens.float("offset")?);
                tokens.expect("}")?;
                let name = format!("{}_end", joints[index].name);
                joints.push(RawJoint { name, parent: Some(index), offset, channels: Vec::new() });
            }
            "}" => return Ok(()),
            other => return Err(ParseError::at_line(line, format!("unexpected token {other:?} in joint block"))),
        }
    }
}

/// Names each limb after its first joint: a chain starts at every child of a
/// branching joint (or the root) and follows single-child links to the next
/// branch point or leaf.
fn branch_chains(joints: &[RawJoint]) -> BTreeMap<String, Vec<usize>> {
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); joints.len()];
    for (i, j) in joints.iter().enumerate() {
        if let Some(p) = j.parent {
            children[p].push(i);
        }
    }
    let mut chains = BTreeMap::new();
    for (i, j) in joints.iter().enumerate() {
        let starts_chain = match j.parent {
            None => false,
            Some(p) => joints[p].parent.is_none() || children[p].len() > 1,
        };
        if !starts_chain {
            continue;
        }
        let mut members = vec![i];
        let mut cur = i;
        while children[cur].len() == 1 {
            cur = children[cur][0];
            members.push(cur);
        }
        chains.insert(j.name.clone(), members);
    }
    chains
}
