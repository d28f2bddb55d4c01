"""Utilities to load configuration files."""

import os
import yaml

from .errors import ConfigError, DataError


__all__ = ["parse_config", "parse_section", "DEFAULT_CONFIG"]


DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                              "default.yml")


def _merge(default, user, where=""):
    """Returns `default` with the values of `user` laid over it.

    `user` may only set keys that `default` has, and may only give a
    mapping where `default` has one. An empty section keeps the defaults.
    """
    if user is None and isinstance(default, dict):
        return default
    if not isinstance(user, dict):
        if isinstance(default, dict):
            raise ConfigError("%s should be a mapping, got %r"
                              % (where or "config", user))
        return user
    if not isinstance(default, dict):
        raise ConfigError("%s takes a single value, got the mapping %s"
                          % (where, user))
    merged = dict(default)
    for key, value in user.items():
        name = "%s.%s" % (where, key) if where else str(key)
        if key not in default:
            raise ConfigError("unknown config key '%s'" % name)
        merged[key] = _merge(default[key], value, name)
    return merged


def _load(path):
    try:
        with open(path) as fid:
            conf = yaml.safe_load(fid)
    except OSError as e:
        raise DataError("Could not read config file %s: %s" % (path, e))
    except yaml.YAMLError as e:
        raise DataError("Malformed config file %s: %s" % (path, e))
    if conf is None:
        return {}
    if not isinstance(conf, dict):
        raise DataError("Config file %s should hold a mapping" % path)
    return conf


def parse_config(path, default=None):
    """Parse a .yml (or .json) configuration file.

    See satatools/default.yml for the config with all the possible
    arguments.

    Args:
        path(str): path to the config file. If none is provided, loads the
            default configuration (or returns an empty config dict).
        default(str): path to the default config file whose values `path`
            overrides. Without it the file is returned as is.
    """

    if default is None:
        return {} if path is None else _load(path)
    conf = _load(default)
    if path is None:
        return conf
    return _merge(conf, _load(path))


def parse_section(path, section, default=DEFAULT_CONFIG):
    """Parse a file that holds a single section of the default config.

    Args:
        path(str or None): path to the file, None for the defaults only.
        section(str): name of the top-level section in `default`.
        default(str): path to the default config file.
    """
    conf = parse_config(None, default=default)
    if section not in conf:
        raise ConfigError("No section '%s' in %s" % (section, default))
    conf = conf[section]
    if path is None:
        return conf
    return _merge(conf, _load(path))
