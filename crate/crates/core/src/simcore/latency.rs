use std::collections::VecDeque;

/// FIFO that holds each event for a fixed number of frames.
///
/// An event pushed during frame `k` is released by `drain_ready(k + delay)`.
#[derive(Clone, Debug)]
pub struct LatencyQueue<E> {
    delay_frames: u32,
    pending: VecDeque<(E, u64)>,
}

impl<E> LatencyQueue<E> {
    pub fn new(delay_frames: u32) -> Self {
        LatencyQueue {
            delay_frames,
            pending: VecDeque::new(),
        }
    }

    pub fn delay_frames(&self) -> u32 {
        self.delay_frames
    }

    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn push(&mut self, event: E, frame_index: u64) {
        self.pending.push_back((event, frame_index));
    }

    /// Removes and returns, in order, every event due at `frame_index`.
    pub fn drain_ready(&mut self, frame_index: u64) -> Vec<E> {
        let mut out = Vec::new();
        while let Some((_, enq)) = self.pending.front() {
            if enq + u64::from(self.delay_frames) > frame_index {
                break;
            }
            let (e, _) = self.pending.pop_front().expect("front exists");
            out.push(e);
        }
        out
    }

    /// Iterates events still in flight, oldest first.
    pub fn in_flight(&self) -> impl Iterator<Item = &E> {
        self.pending.iter().map(|(e, _)| e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_delay_is_passthrough() {
        let mut q = LatencyQueue::new(0);
        q.push('a', 3);
        assert_eq!(q.drain_ready(3), ['a']);
        assert!(q.is_empty());
    }

    #[test]
    fn delay_two() {
        let mut q = LatencyQueue::new(2);
        q.push(1, 0);
        q.push(2, 1);
        assert!(q.drain_ready(0).is_empty());
        assert!(q.drain_ready(1).is_empty());
        assert_eq!(q.drain_ready(2), [1]);
        assert_eq!(q.drain_ready(3), [2]);
    }

    proptest! {
        // Compare against a brute-force reference that scans the whole log.
        #[test]
        fn matches_reference(delay in 0u32..6, per_frame in proptest::collection::vec(0usize..4, 1..60)) {
            let mut q = LatencyQueue::new(delay);
            let mut log: Vec<(u64, u64)> = Vec::new(); // (id, frame pushed)
            let mut next_id = 0;
            let frames = per_frame.len() as u64 + u64::from(delay) + 1;
            let mut released = Vec::new();
            for frame in 0..frames {
                let n = per_frame.get(frame as usize).copied().unwrap_or(0);
                for _ in 0..n {
                    q.push(next_id, frame);
                    log.push((next_id, frame));
                    next_id += 1;
                }
                let got = q.drain_ready(frame);
                let want: Vec<u64> = log.iter()
                    .filter(|(_, f)| f + u64::from(delay) == frame)
                    .map(|(id, _)| *id)
                    .collect();
                prop_assert_eq!(&got, &want);
                released.extend(got);
            }
            prop_assert_eq!(released, (0..next_id).collect::<Vec<_>>());
        }
    }
}
