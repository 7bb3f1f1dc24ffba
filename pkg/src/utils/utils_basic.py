import logging, os, sys, tempfile

LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING")

class CloningException(Exception):
    '''
        Standard error class to be used.
    '''
    def __init__(self, exit_code:int, detail:str):
        '''
            Initializes the CloningException with an exit code and a detailed error message.

            Args:
                exit_code (int): The process exit code the command line maps this error to.
                detail (str): The detailed error message explaining the issue.
        '''
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail

class InvalidInputError(CloningException):
    '''
        Raised for dimension mismatches, non-Hermitian input, domain violations and invalid parameters.
    '''
    def __init__(self, detail:str):
        super().__init__(exit_code=2, detail=detail)

class VerificationError(CloningException):
    def __init__(self, detail:str):
        super().__init__(exit_code=1, detail=detail)

class SolverError(CloningException):
    '''
        Raised when the interior-point solver does not converge.

        Args:
            detail (str): Reason of the failure.
            best (object): Best iterate reached before giving up, if any.
    '''
    def __init__(self, detail:str, best=None):
        super().__init__(exit_code=1, detail=detail)
        self.best = best

def get_logger(name:str) -> logging.Logger:
    """
    Returns a module logger writing to stderr, level taken from LOG_LEVEL.

    Args:
        name: Usually __name__ of the calling module.

    Returns:
        logging.Logger: the configured logger
    """
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)
        logger.setLevel(LOG_LEVEL.upper())
        logger.propagate = False
    return logger

def current_umask() -> int:
    umask = os.umask(0)
    os.umask(umask)
    return umask

def write_output(text:str, out:str|None = None) -> None:
    """
    Writes text to a file atomically or to stdout when no path is given.
    The text goes to a temporary file in the target directory which is renamed on success,
    so a failed run never leaves a partial file behind.

    Args:
        text: The content to write.
        out: Target path, None for standard output.
    """
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    if not os.path.isdir(directory):
        raise InvalidInputError(f"Output directory does not exist: {directory}")
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=os.path.basename(out))
    try:
        # mkstemp creates 0600, the final file gets the usual umask mode
        os.fchmod(fd, 0o666 & ~current_umask())
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_path, out)
    except Exception as e:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise CloningException(exit_code=1, detail="Could not write output file. Error message:" + str(e))
