use thiserror::Error;

#[derive(Debug, Error)]
pub enum CvcError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("{what} is {value}, above the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CvcError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        CvcError::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        CvcError::Structural(msg.into())
    }

    pub(crate) fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
        if value > cap {
            Err(CvcError::CapExceeded { what, value, cap })
        } else {
            Ok(())
        }
    }
}

pub type Result<T> = std::result::Result<T, CvcError>;
