"""Orthogonal wavelet lowpass filters, polished to machine
precision.  Generated by scripts/refine_wavelet_tables.py;
do not edit by hand."""

LOWPASS = {
    "haar": [0.7071067811865476, 0.7071067811865476],
    "daubechies-4": [
        0.4829629131447662,
        0.8365163037377457,
        0.2241438680417813,
        -0.12940952255119814],
    "daubechies-6": [
        0.3326705529506036,
        0.8068915093103423,
        0.45987750211933176,
        -0.13501102001241547,
        -0.0854412738795383,
        0.03522629188477138],
    "daubechies-8": [
        0.23037781330901475,
        0.7148465705528633,
        0.6308807679298748,
        -0.02798376941700988,
        -0.18703481171907416,
        0.03084138183571556,
        0.03288301166673895,
        -0.010597401785028136],
    "daubechies-10": [
        0.16010239797401973,
        0.6038292697970679,
        0.7243085284380955,
        0.13842814590105113,
        -0.24229488706593216,
        -0.032244869584877524,
        0.07757149384014105,
        -0.0062414902129785295,
        -0.012580751998919667,
        0.003335725285427795],
    "daubechies-12": [
        0.11154074334997922,
        0.4946238903980891,
        0.7511339080215643,
        0.3152503517090021,
        -0.2262646939651774,
        -0.12976686756717848,
        0.09750160558730563,
        0.02752286552993845,
        -0.03158203931702266,
        0.0005538422008458222,
        0.004777257511089543,
        -0.001077301085340511],
    "daubechies-14": [
        0.07785205408517915,
        0.3965393194821656,
        0.7291320908460796,
        0.4697822874051023,
        -0.14390600392882572,
        -0.2240361849938905,
        0.07130921926698842,
        0.08061260915100775,
        -0.038029936934885836,
        -0.01657454163084351,
        0.012550998556128647,
        0.0004295779730162653,
        -0.0018016407041143911,
        0.0003537137999881886],
    "daubechies-16": [
        0.054415842243084496,
        0.3128715909140979,
        0.6756307362972556,
        0.5853546836542499,
        -0.015829105255896713,
        -0.2840155429619108,
        0.00047248457421265465,
        0.1287474266202402,
        -0.017369301001830907,
        -0.04408825393070933,
        0.013981027917506635,
        0.00874609404724479,
        -0.0048703529934181235,
        -0.0003917403733354733,
        0.0006754494064245644,
        -0.00011747678412027993],
    "daubechies-18": [
        0.03807794736371818,
        0.24383467461298863,
        0.6048231236899102,
        0.6572880780513841,
        0.13319738582475357,
        -0.2932737832790677,
        -0.09684078322306157,
        0.14854074933849004,
        0.03072568147887604,
        -0.06763282906106989,
        0.0002509471146158706,
        0.02236166212404379,
        -0.004723204758230439,
        -0.004281503681925197,
        0.0018476468825384157,
        0.0002303857638637991,
        -0.0002519631890682785,
        3.93473203356793e-05],
    "daubechies-20": [
        0.026670057900725786,
        0.18817680007757057,
        0.5272011889316225,
        0.6884590394536934,
        0.28117234366065236,
        -0.24984642432738233,
        -0.19594627437736495,
        0.1273693403356399,
        0.09305736460362661,
        -0.0713941471662663,
        -0.029457536821950316,
        0.03321267405926416,
        0.003606553567023732,
        -0.01073317548327627,
        0.001395351746942718,
        0.001992405295252084,
        -0.0006858566949704166,
        -0.00011646685513741748,
        9.358867032471441e-05,
        -1.3264202895277053e-05],
    "symlet-8": [
        -0.07576571478931103,
        -0.02963552764598861,
        0.49761866763248147,
        0.8037387518051968,
        0.29785779560560494,
        -0.09921954357685044,
        -0.012603967262036582,
        0.032223100603998654],
    "symlet-10": [
        0.027333068345036262,
        0.029519490925867777,
        -0.039134249302425095,
        0.19939753397698604,
        0.7234076904039124,
        0.6339789634568331,
        0.016602105764608615,
        -0.17532808990819126,
        -0.0211018340248682,
        0.019538882735335605],
    "symlet-12": [
        0.015404109327147685,
        0.003490712084200796,
        -0.11799011114827013,
        -0.04831174258583655,
        0.4910559419277008,
        0.7876411410287597,
        0.3379294217283736,
        -0.07263752278636584,
        -0.021060292512495325,
        0.04472490177071945,
        0.0017677118642425457,
        -0.0078007083250816525],
    "symlet-14": [
        0.0026818145682886057,
        -0.0010473848887351054,
        -0.01263630340320931,
        0.030515513165859334,
        0.06789269350150243,
        -0.0495528349371999,
        0.01744125508689705,
        0.5361019170907334,
        0.7677643170045805,
        0.2886296317508915,
        -0.14004724044292166,
        -0.10780823770373345,
        0.004010244871687676,
        0.01026817670845407],
    "symlet-16": [
        0.0018899503318277275,
        -0.0003029205149170792,
        -0.014952258338123007,
        0.0038087520139589957,
        0.04913717967182539,
        -0.02721902991627321,
        -0.051945838109603744,
        0.36444189483745876,
        0.7771857516981772,
        0.4813596512607841,
        -0.06127335906898435,
        -0.14329423834954527,
        0.00760748732558197,
        0.03169508781209321,
        -0.0005421323321035118,
        -0.003382415949061636],
    "symlet-18": [
        0.0010694900328942442,
        -0.00047315449860020956,
        -0.010264064027806325,
        0.008859267493563623,
        0.06207778930297154,
        -0.018233770779725874,
        -0.1915508312969195,
        0.03527248803545642,
        0.6173384491413234,
        0.7178970827642515,
        0.23876091460694437,
        -0.05456895843107348,
        0.0005834627462843708,
        0.030224878858192326,
        -0.011528210207874515,
        -0.013271967781619612,
        0.0006197808888981921,
        0.001400915525934808],
    "symlet-20": [
        0.0007701598021685493,
        9.563267726625897e-05,
        -0.008641299282997379,
        -0.0014653825876006603,
        0.04592723923885064,
        0.011609893931498147,
        -0.15949427891128867,
        -0.07088053588441094,
        0.4716906668197295,
        0.769510037025366,
        0.3838267611809516,
        -0.03553674038736835,
        -0.03199005687610666,
        0.049994972082517505,
        0.005764912034214115,
        -0.020354939808835272,
        -0.000804358930160035,
        0.004593173580129002,
        5.703608773197057e-05,
        -0.00045932941856088443],
    "coiflet-6": [
        0.03858077774786163,
        -0.12696912539607655,
        -0.07716155549594612,
        0.607491641386065,
        0.7456875589341322,
        0.2265842651970588],
    "coiflet-12": [
        0.016387336462648328,
        -0.041464936783899106,
        -0.06737255472280948,
        0.38611006682149707,
        0.8127236354504636,
        0.41700518442253065,
        -0.07648859907887037,
        -0.059434418647919825,
        0.023680171946511053,
        0.005611434819259243,
        -0.0018232088708088853,
        -0.0007205494455072656],
    "coiflet-18": [
        -0.0037935128633596804,
        0.007782596424702473,
        0.023452696143231817,
        -0.06577191128225413,
        -0.06112339000225849,
        0.4051769024084848,
        0.7937772226268115,
        0.4284834763765029,
        -0.07179982161824126,
        -0.08230192710728756,
        0.034555027574175265,
        0.01588054486264791,
        -0.009007976136720311,
        -0.002574517688174432,
        0.0011175187707526603,
        0.00046621695975937374,
        -7.098330249206598e-05,
        -3.459977318534715e-05],
    "coiflet-24": [
        0.0008923137404313841,
        -0.0016294920090309149,
        -0.0073461663770744085,
        0.016068943948193137,
        0.026682300170072577,
        -0.08126669967491368,
        -0.05607731331776192,
        0.4153084070291114,
        0.7822389309214565,
        0.4343860564911754,
        -0.06662747426282836,
        -0.09622044203390905,
        0.039334427125850197,
        0.025082261840114597,
        -0.015211731545129179,
        -0.005658286650069766,
        0.0037514363783723408,
        0.001266561408801234,
        -0.000589020504645472,
        -0.00025997444127095397,
        6.233889754370673e-05,
        3.1229883001017474e-05,
        -3.2596514346191524e-06,
        -1.7849929597808494e-06],
    "coiflet-30": [
        -0.00021210205653401923,
        0.00035857549161193104,
        0.0021782779762834054,
        -0.0041593629787227155,
        -0.010131114570630153,
        0.023408139434539062,
        0.028168044806153647,
        -0.09192002261378315,
        -0.05204315042225958,
        0.42156619326592976,
        0.7742896170586959,
        0.43799161298438954,
        -0.062035950740179986,
        -0.10557422180312895,
        0.04128922236602594,
        0.03268356030144005,
        -0.019761767991926943,
        -0.009164240452847262,
        0.006764210770608214,
        0.0024333366416116053,
        -0.001662973475329858,
        -0.0006378824864752107,
        0.00030215229133390695,
        0.00014046974774873972,
        -4.1277986545434264e-05,
        -2.1297993415938076e-05,
        3.7085444780137058e-06,
        2.06552212560788e-06,
        -1.6290040045994305e-07,
        -9.635770082788891e-08],
}
