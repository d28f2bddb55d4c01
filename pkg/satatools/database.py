"""Utilities for sqlite database interaction."""
import os

import pandas as pd
import sqlalchemy as db

from .errors import UsageError


__all__ = ["SQLiteDatabase"]


class SQLiteDatabase(object):
    """Appends rows of metrics to tables of a .sqlite file.

    Args:
        fname(str): path to the database, ".sqlite" is added if the path has
            no extension.
    """

    def __init__(self, fname):
        fname = os.path.abspath(fname)
        dirname = os.path.dirname(fname)
        os.makedirs(dirname, exist_ok=True)
        ext = os.path.splitext(fname)[-1]
        if ext == "":
            fname += ".sqlite"
        else:
            if ext != ".sqlite":
                msg = "Expected .sqlite extension for database"
                raise UsageError(msg)
        self.fname = fname

        self.engine = db.create_engine('sqlite:///' + fname)

    def __repr__(self):
        return "SQLiteDatabase({})".format(self.fname)

    def close(self):
        self.engine.dispose()

    def append_rows(self, rows, table_name):
        """Appends rows of data to a database table.

        Args:
            rows(list of dict): data to insert, one dict per row.
            table_name(str): name of the table to update.
        """
        if not rows:
            return
        pd.DataFrame(rows).to_sql(
            table_name, self.engine, if_exists="append", index=False)

    def append_row(self, data, table_name):
        """Appends a row of data to a database table.
        Args:
            data(dict): data to insert.
            table_name(str): name of the table to update.
        """
        self.append_rows([data], table_name)

    def read_table(self, table_name):
        if not db.inspect(self.engine).has_table(table_name):
            return None
        return pd.read_sql_table(table_name, self.engine)
