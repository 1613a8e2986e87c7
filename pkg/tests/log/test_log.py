from os.path import join

from core.config import LogConfig
from core.log import get_logger, setup


def test_file_handler(tmp_path):
    output = join(tmp_path, "reduction.log")
    cfg = LogConfig(level="DEBUG", output=output)
    setup(cfg, force=True)

    logger = get_logger("core")
    logger.debug("checking entry 0")

    assert len(logger.handlers) == 1
    handler = logger.handlers[0]
    assert handler.level == 10
    assert handler.stream.name == output

    logger.removeHandler(handler)
    handler.close()


def test_log_level(capsys):
    cfg = LogConfig(level="WARNING", output=None)
    setup(cfg, force=True)

    logger = get_logger("core.reduction.verifier")
    logger.debug("checking entry 0")
    logger.info("structure verified")
    logger.warning("enumeration hit the node budget")
    logger.error("structure failed")
    logger.critical("catalog unavailable")

    stderr = capsys.readouterr().err
    assert "checking entry 0" not in stderr
    assert "structure verified" not in stderr
    assert "enumeration hit the node budget" in stderr
    assert "structure failed" in stderr
    assert "catalog unavailable" in stderr


def test_level_override(capsys):
    cfg = LogConfig(level="WARNING", output=None)
    setup(cfg, force=True, level="debug")

    logger = get_logger("core.series.engine")
    logger.debug("reducing atom")

    assert "reducing atom" in capsys.readouterr().err


def test_setup_is_idempotent():
    cfg = LogConfig(level="INFO", output=None)
    assert setup(cfg, force=True) is not None
    assert setup(cfg) is None
    assert len(get_logger("core").handlers) == 1
