"""Outlier rule tables (English glosses) of two media classes: (lhs, rhs, lift, count)."""

CENTER_RIGHT_OUTLIERS = [
    (('European (adj)', 'migrant', 'summit'), 'migration (adj)', 81.5, 38),
    (('migrant', 'summit'), 'migration (adj)', 76.2, 38),
    (('Italian (adj)', 'migrant'), 'ship', 64.6, 39),
    (('EU', 'European', 'migrant'), 'migration (adj)', 60.4, 42),
    (('European', 'migrant', 'country'), 'migration (adj)', 58.0, 46),
    (('Italian (adj)', 'migrant'), 'Italy', 58.0, 54),
    (('ship', 'migrant'), 'Italy', 57.0, 42),
    (('European (adj)', 'migrant'), 'migration (adj)', 54.8, 56),
]

ANTI_SYSTEM_OUTLIERS = [
    (('Dublin', 'migration', 'migrant'), 'IV', 137.1, 28),
    (('IV', 'migrant'), 'Dublin', 127.6, 34),
    (('EU', 'IV', 'migrant'), 'Dublin', 127.6, 29),
    (('IV', 'migration', 'migrant'), 'Dublin', 127.6, 28),
    (('European', 'IV', 'migrant'), 'Dublin', 127.6, 27),
    (('IV', 'migrant', 'country'), 'Dublin', 127.6, 26),
    (('Dublin', 'migrant'), 'IV', 111.0, 34),
    (('Dublin', 'EU', 'migrant'), 'IV', 107.4, 29),
    (('Dublin', 'European (adj)', 'migrant'), 'IV', 105.7, 27),
    (('Dublin', 'migrant', 'country'), 'IV', 104.8, 26),
    (('migrant', 'applicant', 'country'), 'asylum', 88.1, 23),
    (('migrant', 'applicant'), 'asylum', 80.3, 31),
    (('asylum', 'migrant'), 'applicant', 77.6, 31),
    (('asylum', 'migrant', 'country'), 'applicant', 75.9, 23),
    (('Africa', 'migrant', 'country'), 'African (adj)', 75.0, 26),
    (('Africa', 'EU', 'migrant'), 'African (adj)', 62.2, 23),
    (('Hungary', 'migrant'), 'Hungarian (adj)', 62.0, 23),
    (('Africa', 'Europe', 'migrant'), 'African (adj)', 60.6, 28),
    (('Africa', 'migration', 'migrant'), 'African (adj)', 59.9, 24),
    (('Hungarian (adj)', 'migrant'), 'Hungary', 58.7, 23),
    (('Africa', 'migrant'), 'African (adj)', 52.3, 29),
    (('African (adj)', 'Europe', 'migrant'), 'Africa', 49.6, 28),
    (('document', 'migration', 'migrant'), 'legal', 46.6, 24),
    (('declaration', 'migrant'), 'legal', 46.1, 23),
    (('declaration', 'migration', 'migrant'), 'legal', 46.1, 23),
    (('African (adj)', 'migrant', 'country'), 'Africa', 46.1, 26),
    (('African (adj)', 'EU', 'migrant'), 'Africa', 43.8, 23),
    (('African (adj)', 'migration', 'migrant'), 'Africa', 42.5, 24),
    (('migration', 'migrant', 'UN'), 'legal', 41.0, 29),
    (('African (adj)', 'migrant'), 'Africa', 40.3, 29),
    (('document', 'migrant'), 'legal', 38.9, 25),
    (('migrant', 'refugee', 'country'), 'asylum', 36.5, 24),
    (('migrant', 'UN'), 'legal', 36.1, 29),
    (('migration', 'migrant', 'politics'), 'migration (adj)', 35.9, 24),
    (('migration', 'migrant', 'refugee'), 'legal', 33.7, 26),
    (('CzR', 'migrant', 'country'), 'member (adj)', 33.6, 28),
    (('legal', 'migration', 'migrant'), 'migration (adj)', 32.9, 25),
    (('commission', 'migrant', 'country'), 'member (adj)', 32.2, 23),
    (('Africa', 'migrant', 'country'), 'legal', 31.8, 23),
    (('Afrika', 'migration', 'migrant'), 'legal', 31.1, 26),
    (('migration', 'migration (adj)', 'migrant'), 'legal', 30.5, 25),
    (('migrant', 'Germany', 'German (adj)'), 'Merkel', 29.4, 30),
    (('EU', 'commission', 'migrant'), 'member (adj)', 28.8, 24),
    (('migrant', 'our', 'country'), 'member (adj)', 28.5, 26),
    (('migrant', 'minister'), 'Interior (noun)', 26.2, 25),
    (('CzR', 'EU', 'migrant'), 'member (adj)', 26.1, 28),
    (('Africa', 'Europe', 'migrant'), 'legal', 25.9, 25),
    (('declaration', 'migrant'), 'migration', 25.9, 31),
    (('European', 'migrant', 'UN'), 'migration', 25.9, 31),
    (('legal', 'migrant', 'UN'), 'migration', 25.9, 29),
    (('declaration', 'legal', 'migrant'), 'migration', 25.9, 23),
    (('global', 'migrant', 'OSN'), 'migration', 25.9, 23),
    (('migrant', 'German (adj)'), 'Merkel', 25.2, 33),
    (('Evrope', 'legal', 'migrant'), 'Africa', 25.2, 25),
    (('European', 'commission', 'migrant'), 'member (adj)', 25.2, 24),
    (('Africa', 'legal', 'migrant'), 'migration', 25.0, 26),
    (('document', 'legal', 'migrant'), 'migration', 24.8, 24),
    (('Africa', 'migrant', 'union'), 'migration', 24.8, 24),
    (('EU', 'migrant', 'NGO'), 'migration', 24.8, 24),
    (('migrant', 'NGO', 'country'), 'migration', 24.8, 23),
    (('migrant', 'UN', 'refugee'), 'migration', 24.8, 23),
    (('migration', 'migrant', 'union'), 'Africa', 24.7, 24),
]
