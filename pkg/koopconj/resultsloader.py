#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy
#

"""a collection of classes for storing project run results in a database"""

import logging
from datetime import datetime

from koopconj.errors import ConfigError

try:
    from sqlalchemy import (Column, DateTime, Float, ForeignKey, Integer, String,
                            UniqueConstraint, create_engine)
    from sqlalchemy.orm import declarative_base, relationship, sessionmaker
except ImportError:
    raise ConfigError('results_database needs SQLAlchemy 1.4 or later '
                      '(pip install koopman-conjugacy[database])')


log = logging.getLogger(__name__)

Base = declarative_base()


class RunRow(Base):
    """class representing one kct-run invocation"""
    __tablename__ = 'kct_runs'

    id = Column(Integer, nullable=False, primary_key=True)
    project_name = Column(String(50), nullable=False, index=True)
    run_id = Column(DateTime, nullable=False, index=True)
    seed = Column(Integer, nullable=False)
    shuffles = Column(Integer, nullable=False)
    spectra = relationship('SpectrumRow', back_populates='run')
    comparisons = relationship('ComparisonRow', back_populates='run')

    def __repr__(self):
        return "<RunRow('%s', '%s', seed=%i)>" % (self.project_name, self.run_id, self.seed)


class SpectrumRow(Base):
    """class representing the decomposition of one process"""
    __tablename__ = 'kct_spectra'
    __table_args__ = (UniqueConstraint('run_id', 'process', name='uix_run_process'),)

    id = Column(Integer, nullable=False, primary_key=True)
    run_id = Column(Integer, ForeignKey('kct_runs.id'), nullable=False)
    process = Column(String(50), nullable=False, index=True)
    delays = Column(Integer, nullable=False)
    rank = Column(Integer, nullable=False)
    mode_count = Column(Integer, nullable=False)
    run = relationship('RunRow', back_populates='spectra')
    eigenvalues = relationship('EigenvalueRow', back_populates='spectrum')

    def __repr__(self):
        return "<SpectrumRow('%s', modes=%i)>" % (self.process, self.mode_count)


class EigenvalueRow(Base):
    """class representing one Koopman eigenvalue with its residual"""
    __tablename__ = 'kct_eigenvalues'

    id = Column(Integer, nullable=False, primary_key=True)
    spectrum_id = Column(Integer, ForeignKey('kct_spectra.id'), nullable=False)
    position = Column(Integer, nullable=False)
    re = Column(Float, nullable=False)
    im = Column(Float, nullable=False)
    residual = Column(Float, nullable=False)
    spectrum = relationship('SpectrumRow', back_populates='eigenvalues')

    def __repr__(self):
        return "<EigenvalueRow(%r%+rj)>" % (self.re, self.im)


class ComparisonRow(Base):
    """class representing one pairwise spectrum comparison"""
    __tablename__ = 'kct_comparisons'

    id = Column(Integer, nullable=False, primary_key=True)
    run_id = Column(Integer, ForeignKey('kct_runs.id'), nullable=False)
    a = Column(String(50), nullable=False)
    b = Column(String(50), nullable=False)
    test = Column(String(20), nullable=False)
    distance = Column(Float, nullable=False)
    frac_ge = Column(Float)
    verdict = Column(String(20))
    run = relationship('RunRow', back_populates='comparisons')

    def __repr__(self):
        return "<ComparisonRow('%s', '%s', %s=%.3g)>" % (self.a, self.b, self.test, self.distance)


def load_results_database(project_name, run_localtime, results_database, global_config,
                          spectra, pairs):
    """store the spectra and comparisons of one run into a database"""
    engine = create_engine(results_database, echo=False)
    Base.metadata.create_all(engine)
    session = sessionmaker(bind=engine)()

    run_id = datetime(run_localtime.tm_year, run_localtime.tm_mon, run_localtime.tm_mday,
                      run_localtime.tm_hour, run_localtime.tm_min, run_localtime.tm_sec)
    run = RunRow(project_name=project_name, run_id=run_id, seed=global_config.seed,
                 shuffles=global_config.shuffles)
    session.add(run)

    for name in sorted(spectra):
        dec = spectra[name]
        spectrum = SpectrumRow(process=name, delays=int(dec.meta.get('delays', 0)),
                               rank=int(dec.rank), mode_count=dec.mode_count)
        for i, (value, residual) in enumerate(zip(dec.eigenvalues, dec.residuals)):
            spectrum.eigenvalues.append(EigenvalueRow(
                position=i, re=float(value.real), im=float(value.imag), residual=float(residual)))
        run.spectra.append(spectrum)

    for pair in pairs:
        if pair.comparison is not None:
            shuffle = pair.comparison.shuffle
            row = ComparisonRow(a=pair.a, b=pair.b, test=pair.kind,
                                distance=pair.comparison.distance,
                                frac_ge=shuffle.frac_ge if shuffle else None,
                                verdict=pair.comparison.verdict() if shuffle else None)
        else:
            row = ComparisonRow(a=pair.a, b=pair.b, test=pair.kind,
                                distance=pair.semi.max_residual,
                                verdict='subset' if pair.semi.subset else 'not a subset')
        run.comparisons.append(row)

    session.commit()
    log.info('stored %d spectra and %d comparisons in %s', len(spectra), len(pairs),
             results_database)
    session.close()
    return run_id
