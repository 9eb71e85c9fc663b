//! Ordered task execution for parameter scans.
//!
//! Results always come back in task order, so output bytes never depend on
//! the thread count. With the `parallel` feature disabled every call runs
//! sequentially.

use std::panic::{catch_unwind, AssertUnwindSafe};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskPanic {
    pub index: usize,
    pub message: String,
}

impl From<TaskPanic> for crate::Error {
    fn from(p: TaskPanic) -> Self {
        crate::Error::Panic(p.to_string())
    }
}

impl std::fmt::Display for TaskPanic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "task {} panicked: {}", self.index, self.message)
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

fn run_one<T, R, F>(index: usize, task: T, f: &F) -> Result<R, TaskPanic>
where
    F: Fn(T) -> R,
{
    catch_unwind(AssertUnwindSafe(|| f(task))).map_err(|p| TaskPanic {
        index,
        message: panic_message(p),
    })
}

pub fn execute_sequential<T, R, F>(tasks: Vec<T>, f: F) -> Vec<Result<R, TaskPanic>>
where
    F: Fn(T) -> R,
{
    tasks
        .into_iter()
        .enumerate()
        .map(|(i, t)| run_one(i, t, &f))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn execute_parallel<T, R, F>(tasks: Vec<T>, threads: usize, f: F) -> Vec<Result<R, TaskPanic>>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;

    let run = || {
        tasks
            .into_par_iter()
            .enumerate()
            .map(|(i, t)| run_one(i, t, &f))
            .collect::<Vec<_>>()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

/// Runs `f` over `tasks` on `threads` workers (0 = rayon default) and returns
/// the results in task order. A panicking task yields `Err` in its own slot
/// only.
pub fn execute<T, R, F>(tasks: Vec<T>, threads: usize, f: F) -> Vec<Result<R, TaskPanic>>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if threads != 1 && tasks.len() > 1 {
            return execute_parallel(tasks, threads, f);
        }
    }
    let _ = threads;
    execute_sequential(tasks, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_task_list() {
        let out: Vec<Result<u32, _>> = execute(Vec::<u32>::new(), 4, |x| x);
        assert!(out.is_empty());
    }

    #[test]
    fn order_is_preserved_across_thread_counts() {
        let tasks: Vec<u64> = (0..100).collect();
        let f = |x: u64| {
            // uneven work so completion order differs from task order
            let mut acc = x;
            for _ in 0..(1000 * (100 - x)) {
                acc = acc.wrapping_mul(6364136223846793005).wrapping_add(1);
            }
            (x, acc)
        };
        let one = execute(tasks.clone(), 1, f);
        let eight = execute(tasks, 8, f);
        assert_eq!(one, eight);
        for (i, r) in one.iter().enumerate() {
            assert_eq!(r.as_ref().unwrap().0, i as u64);
        }
    }

    #[test]
    fn panic_is_isolated_to_its_row() {
        let out = execute((0..10).collect(), 4, |x: i32| {
            if x == 3 {
                panic!("bad row");
            }
            x * 2
        });
        assert_eq!(out.len(), 10);
        for (i, r) in out.iter().enumerate() {
            if i == 3 {
                let e = r.as_ref().unwrap_err();
                assert_eq!(e.index, 3);
                assert!(e.message.contains("bad row"));
            } else {
                assert_eq!(*r.as_ref().unwrap(), 2 * i as i32);
            }
        }
    }
}
